"""Config parsing, the seeded replication harness, and per-cell statistics.

Config files are flat ``key = value`` text ('#' starts a comment).  Keys:
u, c, sigma, lambda, mu, r, T, h_list, alpha_list, B, grid, master_seed,
output_dir.  Lists are comma-separated; ``grid`` is the triple ``lo,hi,step``.
Defaults: B = 100, grid = u,u+10,0.05, master_seed = 0, output_dir = out.

Every replication owns a documented seed: rep j of cell (alpha_list[ai],
h_list[hi]) uses the uint64 drawn from SeedSequence((master_seed, ai, hi, j));
that integer is written to estimates.csv and is exactly what
``divbar estimate --seed`` consumes, so any run can be recomputed alone.
"""

import csv
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import HFLTWarning, AssumptionWarning, ParseError, ValidationError
from .errors import DivbarError
from .estimator import estimate_barrier
from .levy_model import ModelParams, SamplingScheme, simulate_increments, validate_params
from .oracle import oracle_result

_REQUIRED = ("u", "c", "sigma", "lambda", "mu", "r", "T", "h_list", "alpha_list")
_OPTIONAL = ("B", "grid", "master_seed", "output_dir")


@dataclass(frozen=True)
class GridSpec:
    """Barrier search grid lo..hi (inclusive) in steps of `step`."""

    lo: float
    hi: float
    step: float

    def points(self):
        m = int(round((self.hi - self.lo) / self.step))
        return self.lo + self.step * np.arange(m + 1)


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelParams
    r: float
    T: float
    h_list: tuple
    alpha_list: tuple
    B: int
    grid: GridSpec
    master_seed: int
    output_dir: str

    def n_for(self, h):
        return _integral_steps(self.T, h)


@dataclass(frozen=True)
class CellReport:
    """Replication statistics for one (alpha, h) cell.

    std is about the mean (ddof=0), bias = mean - theta0_ref, and
    mse = bias^2 + std^2, so the three columns satisfy that identity exactly.
    """

    alpha: int
    h: float
    B: int
    mean: float
    std: float
    bias: float
    mse: float
    theta0_ref: float


def _integral_steps(T, h):
    n = int(round(T / h))
    if n < 1 or abs(n * h - T) > 1e-9 * max(1.0, abs(T)):
        raise ValidationError(f"T/h must be integral: T = {T}, h = {h}")
    return n


def _parse_float(key, raw, line_no):
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"line {line_no}: key '{key}': not a number: {raw!r}") from None


def parse_config(path):
    """Read and validate a flat key/value config file.

    Raises
    ------
    ParseError : unreadable line, unknown or duplicate key, missing key,
        non-numeric value (message names the line/field).
    ValidationError : a model/scheme invariant fails (named in the message).
    """
    raw = {}
    lines = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as e:
        raise ParseError(f"cannot read config file {path}: {e}") from None
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"line {line_no}: expected 'key = value', got {line!r}")
        key, val = (part.strip() for part in body.split("=", 1))
        if key not in _REQUIRED + _OPTIONAL:
            raise ParseError(f"line {line_no}: unknown key '{key}'")
        if key in raw:
            raise ParseError(f"line {line_no}: duplicate key '{key}' (first on line {lines[key]})")
        raw[key] = val
        lines[key] = line_no
    for key in _REQUIRED:
        if key not in raw:
            raise ParseError(f"missing required key '{key}'")

    u, c, sigma, lam, mu, r, T = (
        _parse_float(k, raw[k], lines[k]) for k in ("u", "c", "sigma", "lambda", "mu", "r", "T")
    )
    try:
        model = validate_params(u, c, sigma, lam, mu)
    except DivbarError as e:
        raise ValidationError(str(e)) from None
    if not (r > 0):
        raise ValidationError(f"discount rate r must be > 0, got {r}")
    if not (T > 0):
        raise ValidationError(f"horizon T must be > 0, got {T}")

    def float_list(key):
        items = [s.strip() for s in raw[key].split(",") if s.strip()]
        if not items:
            raise ParseError(f"line {lines[key]}: key '{key}': empty list")
        return tuple(_parse_float(key, s, lines[key]) for s in items)

    h_list = float_list("h_list")
    alpha_list = tuple(int(a) for a in float_list("alpha_list"))
    if any(a < 1 for a in alpha_list):
        raise ValidationError(f"alpha_list entries must be >= 1, got {alpha_list}")
    for h in h_list:
        if not (h > 0):
            raise ValidationError(f"h_list entries must be > 0, got {h}")
        _integral_steps(T, h)

    B = int(_parse_float("B", raw["B"], lines["B"])) if "B" in raw else 100
    if B < 1:
        raise ValidationError(f"replication count B must be >= 1, got {B}")

    if "grid" in raw:
        trip = float_list("grid")
        if len(trip) != 3:
            raise ParseError(f"line {lines['grid']}: key 'grid': expected lo,hi,step")
        grid = GridSpec(*trip)
    else:
        grid = GridSpec(u, u + 10.0, 0.05)
    if not (grid.step > 0 and grid.hi > grid.lo):
        raise ValidationError(f"grid needs hi > lo and step > 0, got {grid}")
    if grid.lo < u:
        raise ValidationError(f"grid.lo = {grid.lo} lies below the initial surplus u = {u}")

    master_seed = int(raw.get("master_seed", 0))
    output_dir = raw.get("output_dir", "out")
    return ExperimentConfig(model=model, r=r, T=T, h_list=h_list, alpha_list=alpha_list,
                            B=B, grid=grid, master_seed=master_seed, output_dir=output_dir)


def rep_seed(master_seed, alpha_index, h_index, rep):
    """The documented per-replication seed (uint64 as a Python int)."""
    ss = np.random.SeedSequence((master_seed, alpha_index, h_index, rep))
    return int(ss.generate_state(1, np.uint64)[0])


def run_single(model, r, h, n, alpha, grid_points, seed, refine=False):
    """One replication: simulate an observed path, estimate the barrier.

    The seed splits into a path stream and a permutation stream, so the
    estimate is a pure function of (model, r, scheme, alpha, grid, seed).
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HFLTWarning)
        warnings.simplefilter("ignore", AssumptionWarning)
        path_ss, est_ss = np.random.SeedSequence(seed).spawn(2)
        inc = simulate_increments(model, SamplingScheme(h=h, n=n), path_ss)
        return estimate_barrier(inc, model.u, alpha, grid_points, r, est_ss, refine=refine)


def _run_job(args):
    model, r, h, n, alpha, grid_points, seed, refine, key = args
    est = run_single(model, r, h, n, alpha, grid_points, seed, refine)
    return key, est.theta_hat


def _format(x):
    """Shortest round-trip decimal for floats; plain str for ints."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_csv(path, header, rows):
    with open(path, "w", newline="\n", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_format(x) for x in row])


def run_experiment(cfg, workers=1, refine=False):
    """Run every (alpha, h) cell for B replications and write the outputs.

    Writes table1.csv (alpha,h,B,mean,std,bias,mse) and estimates.csv
    (alpha,h,rep,seed,theta_hat) under cfg.output_dir.  Results are sorted
    by (alpha, h, rep) before writing, so the bytes do not depend on the
    worker count.  A failed replication aborts the run with its diagnostic.

    Returns the list of CellReports in (alpha_index, h_index) order.
    """
    grid_points = cfg.grid.points()
    theta0 = oracle_result(cfg.model, cfg.r).b_star
    jobs = []
    for ai, alpha in enumerate(cfg.alpha_list):
        for hi, h in enumerate(cfg.h_list):
            n = cfg.n_for(h)
            for rep in range(cfg.B):
                seed = rep_seed(cfg.master_seed, ai, hi, rep)
                jobs.append((cfg.model, cfg.r, h, n, alpha, grid_points, seed,
                             refine, (ai, hi, rep)))

    results = {}
    if workers <= 1:
        for job in jobs:
            key, theta_hat = _run_job(job)
            results[key] = theta_hat
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, theta_hat in pool.map(_run_job, jobs, chunksize=4):
                results[key] = theta_hat

    os.makedirs(cfg.output_dir, exist_ok=True)
    est_rows = []
    reports = []
    for ai, alpha in enumerate(cfg.alpha_list):
        for hi, h in enumerate(cfg.h_list):
            cell = np.array([results[(ai, hi, rep)] for rep in range(cfg.B)])
            for rep in range(cfg.B):
                est_rows.append((alpha, h, rep, rep_seed(cfg.master_seed, ai, hi, rep),
                                 float(cell[rep])))
            mean = float(cell.mean())
            std = float(cell.std(ddof=0))
            bias = mean - theta0
            reports.append(CellReport(alpha=alpha, h=h, B=cfg.B, mean=mean, std=std,
                                      bias=bias, mse=bias**2 + std**2, theta0_ref=theta0))

    _write_csv(os.path.join(cfg.output_dir, "estimates.csv"),
               ["alpha", "h", "rep", "seed", "theta_hat"], est_rows)
    _write_csv(os.path.join(cfg.output_dir, "table1.csv"),
               ["alpha", "h", "B", "mean", "std", "bias", "mse"],
               [(rp.alpha, rp.h, rp.B, rp.mean, rp.std, rp.bias, rp.mse) for rp in reports])
    return reports
