"""Quasi-processes: step paths rebuilt from uniformly permuted increments.

A quasi-process shares the increment multiset (and hence the terminal value)
of the observed path; exchangeability of i.i.d. increments makes it equal in
law to the discretized original.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import AssumptionWarning, LengthMismatch, NonPositive
from .levy_model import StepPath, _as_generator


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection of {0..n-1} stored as an index array (0-based)."""

    mapping: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.mapping)

    def is_bijection(self):
        """O(n) check used by tests; sampling always produces a bijection."""
        seen = np.zeros(len(self.mapping), dtype=bool)
        seen[self.mapping] = True
        return bool(seen.all())


@dataclass(frozen=True, eq=False)
class PermutationSet:
    """alpha i.i.d. uniform permutations (with replacement from the n! family)."""

    perms: list
    seed: object


def sample_permutation(n, rng):
    """One uniform permutation of {0..n-1} via an unbiased shuffle.

    numpy's Generator.permutation is a Fisher-Yates shuffle with unbiased
    (rejection-sampled) bounded integer draws, so every one of the n!
    permutations has probability exactly 1/n!.
    """
    if n < 1:
        raise NonPositive(f"permutation length must be >= 1, got {n}")
    return Permutation(mapping=rng.permutation(n))


def _perm_children(n, alpha, seed):
    if n < 1 or alpha < 1:
        raise NonPositive(f"need n >= 1 and alpha >= 1, got n={n}, alpha={alpha}")
    if n / alpha >= 1.0:
        warnings.warn(
            f"n/alpha = {n / alpha:g} >= 1: the rate assumption n/alpha -> 0 "
            "is violated at these sizes",
            AssumptionWarning,
            stacklevel=3,
        )
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    else:
        ss = np.random.SeedSequence(seed)
    return ss.spawn(alpha)


def iter_permutations(n, alpha, seed):
    """Yield the alpha permutations of sample_permutation_set one at a time.

    Streaming twin of sample_permutation_set: permutation i is regenerated
    from the i-th child of the seed, so both modes give identical results
    for identical seeds while this one holds O(n) memory.
    """
    for child in _perm_children(n, alpha, seed):
        yield sample_permutation(n, _as_generator(child))


def sample_permutation_set(n, alpha, seed):
    """Materialize alpha i.i.d. uniform permutations of {0..n-1}.

    Duplicates across draws are permitted (sampling with replacement).
    Warns (AssumptionWarning) when n/alpha >= 1.
    """
    perms = [sample_permutation(n, _as_generator(child)) for child in _perm_children(n, alpha, seed)]
    return PermutationSet(perms=perms, seed=seed)


def build_quasi_path(u0, inc, perm):
    """Rebuild a step path from permuted increments.

    values[k] = u0 + sum of the first k permuted deltas, with the same
    left-to-right cumulative summation as path_from_increments, so the
    identity permutation reproduces the original path bit for bit.
    """
    if len(perm) != inc.scheme.n:
        raise LengthMismatch(
            f"permutation length {len(perm)} != n = {inc.scheme.n}"
        )
    values = np.empty(inc.scheme.n + 1)
    values[0] = u0
    np.cumsum(inc.deltas[perm.mapping], out=values[1:])
    values[1:] += u0
    return StepPath(u0=float(u0), values=values, scheme=inc.scheme)


def ks_statistic(a, b):
    """Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    both = np.concatenate([a, b])
    fa = np.searchsorted(a, both, side="right") / len(a)
    fb = np.searchsorted(b, both, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


def ks_critical(level, m, n):
    """Asymptotic two-sample KS critical value c(level)*sqrt((m+n)/(m*n))."""
    c = np.sqrt(-np.log(level / 2.0) / 2.0)
    return float(c * np.sqrt((m + n) / (m * n)))


def marginal_sample(p, t, size, rng):
    """Exact draws of X_t: u + c*t + sigma*sqrt(t)*Z - compound Poisson(t).

    Used as the "fresh simulation" side of the marginal-law diagnostic; on
    the exact grid the discretized path at time t has exactly this law.
    """
    x = p.u + p.c * t + p.sigma * np.sqrt(t) * rng.standard_normal(size)
    counts = rng.poisson(p.lam * t, size)
    total = int(counts.sum())
    if total > 0:
        sizes = rng.exponential(1.0 / p.mu, total)
        owner = np.repeat(np.arange(size), counts)
        x -= np.bincount(owner, weights=sizes, minlength=size)
    return x


def quasi_marginal_ks(p, scheme, size, seed, conditional=False):
    """Empirical check that a quasi-process matches the law of the original:
    KS distance at t = T/2 between quasi-path marginals and fresh
    simulations of X_{T/2}.

    With conditional=False (the unconditional quasi-process law) each of the
    `size` quasi marginals is built from its own freshly simulated observed
    path and one uniform permutation.  With conditional=True all quasi
    marginals share a single observed path; that ensemble has roughly half
    the true marginal variance (sampling n/2 of n increments without
    replacement), which is visible at any fixed n.

    Returns
    -------
    (stat, quasi, fresh) : the KS statistic and both marginal samples.
    """
    from .levy_model import simulate_increments  # cycle-free local import

    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    n = scheme.n
    half = n // 2
    quasi = np.empty(size)
    if conditional:
        path_ss, perm_ss, fresh_ss = ss.spawn(3)
        inc = simulate_increments(p, scheme, path_ss)
        for i, perm in enumerate(iter_permutations(n, size, perm_ss)):
            quasi[i] = build_quasi_path(p.u, inc, perm).values[half]
    else:
        quasi_ss, fresh_ss = ss.spawn(2)
        for i, child in enumerate(quasi_ss.spawn(size)):
            inc_ss, perm_ss = child.spawn(2)
            inc = simulate_increments(p, scheme, inc_ss)
            perm = sample_permutation(n, _as_generator(perm_ss))
            quasi[i] = build_quasi_path(p.u, inc, perm).values[half]
    fresh = marginal_sample(p, half * scheme.h, size, _as_generator(fresh_ss))
    return ks_statistic(quasi, fresh), quasi, fresh
