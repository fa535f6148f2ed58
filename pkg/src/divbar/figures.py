"""Long-format CSV emitters behind the reference figures.

All figure CSVs carry a header row, '.' decimals, LF line endings, and
numbers printed with 17 significant digits; plotting itself is out of scope
(any tool can consume the files).
"""

import os
import warnings

import numpy as np

from .dividend import value_curve
from .errors import AssumptionWarning, HFLTWarning
from .estimator import estimate_barrier
from .experiment import run_experiment
from .levy_model import SamplingScheme, path_from_increments, simulate_increments
from .oracle import oracle_result
from .quasi_process import build_quasi_path, iter_permutations

FIGURES = ("paths", "quasi", "valuecurves", "contrast", "boxplot")

# seed-tag namespaces; replication seeds use 4-tuples so these cannot collide
_TAG_PATHS = 9001
_TAG_QUASI = 9002
_TAG_CURVES = 9003
_TAG_CONTRAST = 9004

_N_VALUE_CURVES = 5  # the value-curve figure shows five quasi-paths


def _g17(x):
    return format(float(x), ".17g")


def _cell(c):
    if isinstance(c, str):
        # RFC-4180 quoting: series ids like "alpha=100,h=0.1" carry commas
        return '"' + c.replace('"', '""') + '"' if any(ch in c for ch in ',"\n') else c
    return str(c) if isinstance(c, int) else _g17(c)


def _write(path, header, rows):
    with open(path, "w", newline="\n", encoding="utf-8") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_cell(c) for c in row) + "\n")


def _first_scheme(cfg):
    h = cfg.h_list[0]
    return SamplingScheme(h=h, n=cfg.n_for(h))


def _emit_paths(cfg, out_dir):
    """B observed sample paths at the first grid step: (path_id, t, value)."""
    scheme = _first_scheme(cfg)
    times = scheme.times()
    rows = []
    for i in range(cfg.B):
        inc = simulate_increments(cfg.model, scheme,
                                  np.random.SeedSequence((cfg.master_seed, _TAG_PATHS, i)))
        path = path_from_increments(cfg.model.u, inc)
        rows.extend((i + 1, t, v) for t, v in zip(times, path.values))
    _write(os.path.join(out_dir, "paths.csv"), ["path_id", "t", "value"], rows)


def _emit_quasi(cfg, out_dir):
    """One observed path (perm_id 0) plus alpha_list[0] quasi-paths of it."""
    scheme = _first_scheme(cfg)
    alpha = cfg.alpha_list[0]
    times = scheme.times()
    inc = simulate_increments(cfg.model, scheme,
                              np.random.SeedSequence((cfg.master_seed, _TAG_QUASI, 0)))
    rows = [(0, t, v) for t, v in zip(times, path_from_increments(cfg.model.u, inc).values)]
    perm_seed = np.random.SeedSequence((cfg.master_seed, _TAG_QUASI, 1))
    for i, perm in enumerate(iter_permutations(scheme.n, alpha, perm_seed)):
        quasi = build_quasi_path(cfg.model.u, inc, perm)
        rows.extend((i + 1, t, v) for t, v in zip(times, quasi.values))
    _write(os.path.join(out_dir, "quasi.csv"), ["perm_id", "t", "value"], rows)


def _emit_valuecurves(cfg, out_dir):
    """Value curves h_n^theta of five quasi-paths: (perm_id, theta, value)."""
    scheme = _first_scheme(cfg)
    grid = cfg.grid.points()
    inc = simulate_increments(cfg.model, scheme,
                              np.random.SeedSequence((cfg.master_seed, _TAG_CURVES, 0)))
    perm_seed = np.random.SeedSequence((cfg.master_seed, _TAG_CURVES, 1))
    rows = []
    for i, perm in enumerate(iter_permutations(scheme.n, _N_VALUE_CURVES, perm_seed)):
        curve = value_curve(build_quasi_path(cfg.model.u, inc, perm), grid, cfg.r)
        rows.extend((i + 1, th, v) for th, v in zip(curve.thetas, curve.values))
    _write(os.path.join(out_dir, "valuecurves.csv"), ["perm_id", "theta", "value"], rows)


def _emit_contrast(cfg, out_dir):
    """Contrast curves for every (alpha, h) pair plus the oracle curve."""
    grid = cfg.grid.points()
    rows = []
    for hi, h in enumerate(cfg.h_list):
        scheme = SamplingScheme(h=h, n=cfg.n_for(h))
        for ai, alpha in enumerate(cfg.alpha_list):
            ss = np.random.SeedSequence((cfg.master_seed, _TAG_CONTRAST, ai, hi))
            path_ss, est_ss = ss.spawn(2)
            inc = simulate_increments(cfg.model, scheme, path_ss)
            est = estimate_barrier(inc, cfg.model.u, alpha, grid, cfg.r, est_ss)
            sid = f"alpha={alpha},h={h:g}"
            rows.extend((sid, th, v) for th, v in zip(est.curve.thetas, est.curve.values))
    orc = oracle_result(cfg.model, cfg.r)
    rows.extend(("oracle", th, orc.value_at(cfg.model.u, th)) for th in grid)
    _write(os.path.join(out_dir, "contrast.csv"), ["series_id", "theta", "mean_value"], rows)


def emit_figures(cfg, which=FIGURES, workers=1):
    """Emit the requested figure CSVs under cfg.output_dir.

    ``boxplot`` reuses estimates.csv (the box plots are drawn straight from
    the per-replication estimates): the experiment is run only if that file
    is not already present.
    """
    unknown = [w for w in which if w not in FIGURES]
    if unknown:
        raise ValueError(f"unknown figure selector(s) {unknown}; choose from {FIGURES}")
    out_dir = cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    written = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HFLTWarning)
        warnings.simplefilter("ignore", AssumptionWarning)
        for name in which:
            if name == "boxplot":
                target = os.path.join(out_dir, "estimates.csv")
                if not os.path.exists(target):
                    run_experiment(cfg, workers=workers)
                written.append(target)
                continue
            {"paths": _emit_paths, "quasi": _emit_quasi,
             "valuecurves": _emit_valuecurves, "contrast": _emit_contrast}[name](cfg, out_dir)
            written.append(os.path.join(out_dir, f"{name}.csv"))
    return written
