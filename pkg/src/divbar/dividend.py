"""Barrier dividend strategy on a step path: dividends, ruin, discounted value.

For a barrier theta, cumulative dividends are xi_k = (M_k - theta)+ with M_k
the left-open running supremum, the controlled surplus is U_k = X_k - xi_k,
ruin is the first grid index with U_k < 0 (else n), and the value is

    h_n^theta = sum_{k : ruin_index > k} e^{-r t_k} (xi_k - xi_{k-1}).

As a function of theta this is piecewise linear: it kinks at the running-max
record levels (where the dividend stream starts/stops crossing theta) and
jumps upward at the levels M_k - X_k where lowering theta below them triggers
ruin at step k.  Everything here is evaluated through one compressed
per-path record structure so that single-theta, grid, and ensemble
evaluations agree bit for bit.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonPositive


@dataclass(frozen=True)
class BarrierParams:
    """A barrier level and a discount rate (r > 0)."""

    theta: float
    r: float

    def __post_init__(self):
        if not (self.r > 0):
            raise NonPositive(f"discount rate r must be > 0, got {self.r}")


@dataclass(frozen=True)
class DividendOutcome:
    """Ruin index (tau = t_{ruin_index}; = n when no ruin by T), the ruined
    flag, and the discounted dividend value."""

    ruin_index: int
    ruined: bool
    value: float


@dataclass(frozen=True, eq=False)
class ValueCurve:
    """h_n^theta on a barrier grid plus the exact discontinuity/kink candidates."""

    thetas: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    breakpoints: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class PathRecords:
    """Compressed representation of one path's theta -> value map.

    Payment records: at step k_i the running max rises to level A_i (from
    A_{i-1}), paying e^{-r t_{k_i}} * ((A_i - theta)+ - (A_{i-1} - theta)+).
    Ruin records: the strictly increasing prefix maxima P_i of
    rho_k = M_k - X_k (+inf where X_k < 0), reached at step kappa_i; ruin
    happens at the first k with rho_k > theta.
    """

    n: int
    krec: np.ndarray = field(repr=False)  # payment steps, increasing
    levels: np.ndarray = field(repr=False)  # record levels A_i, increasing
    weights: np.ndarray = field(repr=False)  # e^{-r t_{k_i}}
    csum: np.ndarray = field(repr=False)  # prefix sums of w_i*(A_i - A_{i-1})
    kappa: np.ndarray = field(repr=False)  # ruin-record steps, increasing
    rho: np.ndarray = field(repr=False)  # ruin-record thresholds, increasing


def running_presup(path):
    """Left-open running supremum M_k = max(values[0..k-1]) for k = 1..n."""
    return np.maximum.accumulate(path.values[:-1])


def path_records(path, r):
    """Build the PathRecords of one path for discount rate r."""
    if not (r > 0):
        raise NonPositive(f"discount rate r must be > 0, got {r}")
    vals = path.values
    n = path.scheme.n
    m = np.maximum.accumulate(vals[:-1])

    rec = np.empty(n, dtype=bool)
    rec[0] = True
    rec[1:] = m[1:] > m[:-1]
    krec = np.flatnonzero(rec) + 1  # 1-based pay step
    levels = m[krec - 1]
    weights = np.exp(-r * path.scheme.h * krec)
    const = weights * np.diff(levels, prepend=levels[0])
    const[0] = 0.0  # the first record rises from -inf; handled as pure linear term
    csum = np.concatenate(([0.0], np.cumsum(const)))

    x = vals[1:]
    rho_all = np.where(x >= 0, m - x, np.inf)
    pm = np.maximum.accumulate(rho_all)
    rrec = np.empty(n, dtype=bool)
    rrec[0] = True
    rrec[1:] = rho_all[1:] > pm[:-1]
    kappa = np.flatnonzero(rrec) + 1
    rho = rho_all[kappa - 1]

    return PathRecords(n=n, krec=krec, levels=levels, weights=weights,
                       csum=csum, kappa=kappa, rho=rho)


def records_ruin(rec, thetas):
    """(ruin_index, ruined) per theta; ruin_index = n when ruin never happens."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    ip = np.searchsorted(rec.rho, thetas, side="right")
    ruined = ip < len(rec.rho)
    kstar = np.where(ruined, rec.kappa[np.minimum(ip, len(rec.rho) - 1)], rec.n)
    return kstar, ruined


def records_value(rec, thetas):
    """Discounted dividend value at each theta (vectorized, exact).

    Included payment records are those strictly before the ruin index (with
    the no-ruin convention ruin_index = n, so a payment at t_n is never
    collected — the strict tau > t_k reading).  Among them, at most one
    record straddles theta (linear term); records entirely above theta
    contribute their constant w_i*(A_i - A_{i-1}), summed via prefix sums.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    kstar, _ = records_ruin(rec, thetas)
    n_inc = np.searchsorted(rec.krec, kstar, side="left")
    j = np.searchsorted(rec.levels, thetas, side="left")
    jc = np.minimum(j, len(rec.levels) - 1)
    lin = np.where(j < n_inc, rec.weights[jc] * (rec.levels[jc] - thetas), 0.0)
    return lin + (rec.csum[n_inc] - rec.csum[np.minimum(j + 1, n_inc)])


def barrier_outcome(path, bp):
    """Ruin index, ruined flag, and value h_n^theta for one barrier."""
    if bp.theta < path.u0:
        raise DomainError(
            f"barrier theta = {bp.theta} below the initial surplus u = {path.u0}"
        )
    rec = path_records(path, bp.r)
    kstar, ruined = records_ruin(rec, bp.theta)
    value = records_value(rec, bp.theta)
    return DividendOutcome(ruin_index=int(kstar[0]), ruined=bool(ruined[0]),
                           value=float(value[0]))


def breakpoints_in(rec, lo, hi):
    """Sorted distinct value-curve breakpoints of one path inside (lo, hi):
    the record levels (kinks) and the finite ruin thresholds (upward jumps)."""
    cand = np.concatenate([rec.levels, rec.rho[np.isfinite(rec.rho)]])
    cand = np.unique(cand)
    return cand[(cand > lo) & (cand < hi)]


def value_curve(path, grid, r):
    """Evaluate theta -> h_n^theta on a sorted grid.

    Each values[j] is bit-identical to barrier_outcome(path, (grid[j], r)).value
    (one shared evaluation path).  Between consecutive breakpoints the curve
    is exactly linear and non-increasing; it jumps upward across ruin
    thresholds because raising theta past them extends the ruin time.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if len(grid) == 0:
        raise NonPositive("empty barrier grid")
    if np.any(np.diff(grid) < 0):
        raise DomainError("barrier grid must be sorted ascending")
    if grid[0] < path.u0:
        raise DomainError(
            f"barrier grid starts at {grid[0]}, below the initial surplus u = {path.u0}"
        )
    rec = path_records(path, r)
    values = records_value(rec, grid)
    bps = breakpoints_in(rec, grid[0], grid[-1])
    return ValueCurve(thetas=grid, values=values, breakpoints=bps)
