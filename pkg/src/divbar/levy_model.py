"""Surplus model: Brownian motion with drift minus a compound Poisson process
with exponential claims, sampled exactly on a regular grid.

X_t = u + c*t + sigma*W_t - S_t,    S_t = sum of N_t exponential(mu) claims.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    HFLTWarning,
    NegativeVolatility,
    NetProfitViolation,
    NonPositive,
)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the surplus process.

    Attributes
    ----------
    u : float
        Initial surplus (>= 0).
    c : float
        Premium rate (> 0).
    sigma : float
        Diffusion volatility (>= 0).
    lam : float
        Claim arrival intensity (>= 0).  Config key: ``lambda``.
    mu : float
        Rate of the exponential claim sizes (> 0); mean claim is 1/mu.
    """

    u: float
    c: float
    sigma: float
    lam: float
    mu: float

    @property
    def expected_claim_rate(self):
        """E[S_1] = lam/mu, the mean claim outflow per unit time."""
        return self.lam / self.mu


@dataclass(frozen=True)
class SamplingScheme:
    """Regular observation grid 0 = t_0 < t_1 < ... < t_n = T with step h.

    Emits an HFLTWarning when the grid is far from the high-frequency
    long-horizon regime (rule: h >= 1, or T = n*h < 10).
    """

    h: float
    n: int

    def __post_init__(self):
        if not (self.h > 0):
            raise NonPositive(f"grid step h must be > 0, got {self.h}")
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise NonPositive(f"step count n must be an integer >= 1, got {self.n}")
        if self.h >= 1.0:
            warnings.warn(
                f"h = {self.h} is not small; the estimator's consistency "
                "assumes h -> 0 (expect bias at coarse sampling)",
                HFLTWarning,
                stacklevel=2,
            )
        if self.T < 10.0:
            warnings.warn(
                f"T = n*h = {self.T} is a short horizon; consistency assumes "
                "T -> infinity",
                HFLTWarning,
                stacklevel=2,
            )

    @property
    def T(self):
        return self.n * self.h

    def times(self):
        """Grid times t_0..t_n."""
        return self.h * np.arange(self.n + 1)


@dataclass(frozen=True, eq=False)
class IncrementSeries:
    """The observed increment vector (Delta_1 X, ..., Delta_n X)."""

    scheme: SamplingScheme
    deltas: np.ndarray = field(repr=False)

    def __post_init__(self):
        deltas = np.asarray(self.deltas, dtype=np.float64)
        object.__setattr__(self, "deltas", deltas)
        if deltas.ndim != 1 or len(deltas) != self.scheme.n:
            raise NonPositive(
                f"increment vector has length {len(deltas)}, scheme says n = {self.scheme.n}"
            )


@dataclass(frozen=True, eq=False)
class StepPath:
    """A right-continuous step path on the grid: values[k] = X_{t_k}."""

    u0: float
    values: np.ndarray = field(repr=False)
    scheme: SamplingScheme

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if len(values) != self.scheme.n + 1:
            raise NonPositive(
                f"path has {len(values)} grid values, expected n+1 = {self.scheme.n + 1}"
            )


def validate_params(u, c, sigma, lam, mu):
    """Check raw numbers and return a ModelParams.

    Raises
    ------
    NonPositive, NegativeVolatility, NetProfitViolation
    """
    u, c, sigma, lam, mu = (float(v) for v in (u, c, sigma, lam, mu))
    if not (u >= 0):
        raise NonPositive(f"initial surplus u must be >= 0, got {u}")
    if not (c > 0):
        raise NonPositive(f"premium rate c must be > 0, got {c}")
    if sigma < 0:
        raise NegativeVolatility(f"volatility sigma must be >= 0, got {sigma}")
    if not (lam >= 0):
        raise NonPositive(f"claim intensity lambda must be >= 0, got {lam}")
    if not (mu > 0):
        raise NonPositive(f"claim rate mu must be > 0, got {mu}")
    if not (c > lam / mu):
        raise NetProfitViolation(
            f"net profit condition violated: c = {c} <= E[S_1] = lambda/mu = {lam / mu}"
        )
    return ModelParams(u=u, c=c, sigma=sigma, lam=lam, mu=mu)


def _as_generator(seed):
    """Accept an int, SeedSequence, or Generator and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def simulate_increments(p, s, seed):
    """Draw the n grid increments of X exactly (no Euler bias).

    Each increment is c*h + sigma*sqrt(h)*Z - sum of N exponential claims,
    with Z ~ N(0,1), N ~ Poisson(lam*h).  Deterministic function of the seed.

    Parameters
    ----------
    p : ModelParams
    s : SamplingScheme
    seed : int, SeedSequence, or Generator

    Returns
    -------
    IncrementSeries
    """
    rng = _as_generator(seed)
    n = s.n
    z = rng.standard_normal(n)
    deltas = p.c * s.h + p.sigma * np.sqrt(s.h) * z
    if p.lam > 0:
        counts = rng.poisson(p.lam * s.h, n)
        total = int(counts.sum())
        if total > 0:
            sizes = rng.exponential(1.0 / p.mu, total)
            owner = np.repeat(np.arange(n), counts)
            deltas -= np.bincount(owner, weights=sizes, minlength=n)
    return IncrementSeries(scheme=s, deltas=deltas)


def path_from_increments(u0, inc):
    """Cumulative-sum reconstruction: values[k] = u0 + sum of the first k deltas.

    Left-to-right 64-bit summation (np.cumsum); the exact inverse of taking
    consecutive differences up to float accumulation.
    """
    values = np.empty(inc.scheme.n + 1)
    values[0] = u0
    np.cumsum(inc.deltas, out=values[1:])
    values[1:] += u0
    return StepPath(u0=float(u0), values=values, scheme=inc.scheme)
