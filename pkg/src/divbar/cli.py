"""Command-line interface.

Subcommands: simulate, estimate, oracle, experiment, figures.  Every command
takes --config; --seed overrides master_seed, --out overrides output_dir.
Exit code 0 on success, 2 with a one-line diagnostic on error.
"""

import argparse
import csv
import os
import sys
from dataclasses import replace

import numpy as np

from .dividend import ValueCurve  # noqa: F401  (re-exported for consumers)
from .errors import DivbarError, ParseError
from .experiment import parse_config, rep_seed, run_experiment, run_single
from .figures import FIGURES, emit_figures
from .levy_model import IncrementSeries, SamplingScheme, path_from_increments, simulate_increments
from .oracle import oracle_result
from .estimator import estimate_barrier


def _load_cfg(args):
    cfg = parse_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if getattr(args, "out", None) is not None:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def _g17(x):
    return format(float(x), ".17g")


def _cmd_simulate(args):
    """Emit one observed path as CSV (columns t,value)."""
    cfg = _load_cfg(args)
    h = cfg.h_list[0]
    seed = rep_seed(cfg.master_seed, 0, 0, 0)
    path_ss, _ = np.random.SeedSequence(seed).spawn(2)
    inc = simulate_increments(cfg.model, SamplingScheme(h=h, n=cfg.n_for(h)), path_ss)
    path = path_from_increments(cfg.model.u, inc)
    os.makedirs(cfg.output_dir, exist_ok=True)
    target = os.path.join(cfg.output_dir, "path.csv")
    with open(target, "w", newline="\n", encoding="utf-8") as f:
        f.write("t,value\n")
        for t, v in zip(path.scheme.times(), path.values):
            f.write(f"{_g17(t)},{_g17(v)}\n")
    print(f"wrote {target} (n={path.scheme.n}, h={h:g}, T={path.scheme.T:g}, "
          f"terminal={path.values[-1]:.6f})")
    return 0


def _read_path_csv(fname):
    """Read a t,value CSV back into an increment series (uniform grid)."""
    with open(fname, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:2]] != ["t", "value"]:
            raise ParseError(f"{fname}: expected header 't,value'")
        t, v = [], []
        for row in reader:
            if not row:
                continue
            t.append(float(row[0]))
            v.append(float(row[1]))
    if len(t) < 2:
        raise ParseError(f"{fname}: need at least two grid points")
    t = np.asarray(t)
    v = np.asarray(v)
    n = len(t) - 1
    h = (t[-1] - t[0]) / n
    if np.max(np.abs(np.diff(t) - h)) > 1e-9 * max(1.0, h):
        raise ParseError(f"{fname}: grid times are not equally spaced")
    return v[0], IncrementSeries(scheme=SamplingScheme(h=float(h), n=n), deltas=np.diff(v))


def _cmd_estimate(args):
    """One barrier estimate, from --path-csv or a fresh simulation."""
    cfg = _load_cfg(args)
    alpha = cfg.alpha_list[0]
    grid = cfg.grid.points()
    seed = rep_seed(cfg.master_seed, 0, 0, 0) if args.seed is None else args.seed
    path_ss, est_ss = np.random.SeedSequence(seed).spawn(2)
    if args.path_csv:
        u0, inc = _read_path_csv(args.path_csv)
    else:
        h = cfg.h_list[0]
        inc = simulate_increments(cfg.model, SamplingScheme(h=h, n=cfg.n_for(h)), path_ss)
        u0 = cfg.model.u
    est = estimate_barrier(inc, u0, alpha, grid, cfg.r, est_ss, refine=args.refine)
    print(f"theta_hat = {est.theta_hat!r}")
    d = est.diagnostics
    print(f"alpha={d['alpha']} h={d['h']:g} n={d['n']} T={d['T']:g} seed={seed} "
          f"refined={d['refined']} grid_value={d['grid_value']:.6f}")
    for w in d["warnings"]:
        print(f"note: {w}")
    os.makedirs(cfg.output_dir, exist_ok=True)
    target = os.path.join(cfg.output_dir, "estimate_curve.csv")
    with open(target, "w", newline="\n", encoding="utf-8") as f:
        f.write("theta,value\n")
        for th, v in zip(est.curve.thetas, est.curve.values):
            f.write(f"{_g17(th)},{_g17(v)}\n")
    print(f"wrote {target}")
    return 0


def _cmd_oracle(args):
    """Print Lundberg roots, b*, and the V(u; b) table as CSV."""
    cfg = _load_cfg(args)
    orc = oracle_result(cfg.model, cfg.r)
    for i, s in enumerate(orc.roots.roots, start=1):
        print(f"s_{i} = {s!r}")
    print(f"b_star = {orc.b_star!r}")
    grid = cfg.grid.points()
    lines = ["b,value"]
    lines += [f"{_g17(b)},{_g17(orc.value_at(cfg.model.u, b))}" for b in grid if b >= cfg.model.u]
    print("\n".join(lines))
    if args.out is not None:
        os.makedirs(cfg.output_dir, exist_ok=True)
        target = os.path.join(cfg.output_dir, "oracle_values.csv")
        with open(target, "w", newline="\n", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
        print(f"wrote {target}", file=sys.stderr)
    return 0


def _cmd_experiment(args):
    """Full replication study: writes table1.csv and estimates.csv."""
    cfg = _load_cfg(args)
    reports = run_experiment(cfg, workers=args.workers, refine=args.refine)
    print(f"theta0 = {reports[0].theta0_ref!r}")
    print("alpha      h    B     mean      std     bias      mse")
    for rp in reports:
        print(f"{rp.alpha:5d} {rp.h:6g} {rp.B:4d} {rp.mean:8.3f} {rp.std:8.3f} "
              f"{rp.bias:8.3f} {rp.mse:8.3f}")
    print(f"wrote {os.path.join(cfg.output_dir, 'table1.csv')} and estimates.csv")
    return 0


def _cmd_figures(args):
    cfg = _load_cfg(args)
    which = tuple(s.strip() for s in args.which.split(",")) if args.which else FIGURES
    try:
        written = emit_figures(cfg, which, workers=args.workers)
    except ValueError as e:
        raise DivbarError(str(e)) from None
    for f in written:
        print(f"wrote {f}")
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="divbar",
        description="Dividend-barrier estimation for a Levy insurance surplus "
                    "process from one discretely observed path.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, doc, refine=False, workers=False, path_csv=False, which=False):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="flat key=value config file")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument("--out", default=None, help="override output_dir")
        if refine:
            p.add_argument("--refine", action="store_true",
                           help="exact breakpoint refinement of the grid argmax")
        if workers:
            p.add_argument("--workers", type=int, default=1,
                           help="process count (outputs do not depend on it)")
        if path_csv:
            p.add_argument("--path-csv", default=None,
                           help="estimate from this t,value CSV instead of simulating")
        if which:
            p.add_argument("--which", default=None,
                           help=f"comma list from {','.join(FIGURES)} (default: all)")
        p.set_defaults(fn=fn)
        return p

    add("simulate", _cmd_simulate, "emit one observed path CSV")
    add("estimate", _cmd_estimate, "estimate the barrier from a path CSV or fresh simulation",
        refine=True, path_csv=True)
    add("oracle", _cmd_oracle, "print Lundberg roots, b*, and the true-value table")
    add("experiment", _cmd_experiment, "run the full replication study",
        refine=True, workers=True)
    add("figures", _cmd_figures, "emit figure CSVs", workers=True, which=True)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except DivbarError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
