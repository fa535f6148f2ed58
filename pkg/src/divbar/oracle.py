"""Closed-form ground truth for the compound Poisson model perturbed by
diffusion with exponential claims.

The Laplace exponent of X - u is

    psi(s) = c*s + (sigma^2/2)*s^2 - lam*s/(mu + s),

and psi(s) = r, cleared of its denominator, is the cubic

    (sigma^2/2) s^3 + (c + sigma^2 mu/2) s^2 + (c mu - lam - r) s - r mu = 0

with three real roots s_1 > 0 > s_2 > s_3.  The r-scale function is the
exponential mixture W(x) = sum_j e^{s_j x} / psi'(s_j); the expected
discounted dividends of the barrier strategy are V(u; b) = W(u)/W'(b), and
the optimal barrier solves W''(b) = 0.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BracketNotFound, DegenerateRoots, DomainError, NoDiffusion, NonPositive

_PSI_RESIDUAL_TOL = 1e-10


def psi(p, s):
    """Laplace exponent of X - u at s (s > -mu for the jump term)."""
    s = np.asarray(s, dtype=np.float64)
    return p.c * s + 0.5 * p.sigma**2 * s**2 - p.lam * s / (p.mu + s)


def psi_prime(p, s):
    """psi'(s) = c + sigma^2 s - lam*mu/(mu+s)^2."""
    s = np.asarray(s, dtype=np.float64)
    return p.c + p.sigma**2 * s - p.lam * p.mu / (p.mu + s) ** 2


@dataclass(frozen=True)
class LundbergRoots:
    """The three real solutions of psi(s) = r, sorted descending.

    For lam = 0 the cleared cubic acquires the spurious factor (mu + s); the
    root s = -mu is then carried along (the examples in the quadratic case
    list it) but receives scale-function weight exactly 0 and is exempt from
    the psi-residual check, since psi itself has a pole there.
    """

    roots: tuple
    params: object
    r: float

    def genuine(self):
        """Mask of roots that actually solve psi(s) = r (excludes s = -mu
        when lam = 0)."""
        return np.array([abs(s + self.params.mu) > 1e-12 for s in self.roots])


@dataclass(frozen=True)
class ScaleFunction:
    """W(x) = sum_j A_j e^{s_j x} with A_j = 1/psi'(s_j) (0 for a spurious root).

    Verified at construction: W(0) = 0 (to 1e-9), W'(0) = 2/sigma^2
    (to 1e-8 relative), both partial-fraction identities for sigma > 0.
    """

    roots: LundbergRoots
    coefficients: tuple

    def eval(self, x, order=0):
        s = np.asarray(self.roots.roots)
        a = np.asarray(self.coefficients)
        x = np.asarray(x, dtype=np.float64)
        terms = s**order * a * np.exp(s * x[..., None])
        return terms.sum(axis=-1)


@dataclass(frozen=True)
class OracleResult:
    """Everything the figures and acceptance tests need from the closed form."""

    roots: LundbergRoots
    scale: ScaleFunction
    b_star: float

    def value_at(self, u, b):
        return true_value(self.roots, u, b)


def lundberg_roots(p, r):
    """Solve psi(s) = r for the three real Lundberg roots.

    Companion-matrix roots of the cleared cubic, then Newton polish on
    psi(s) - r down to a 1e-12 residual (spurious -mu root excluded).

    Raises
    ------
    NoDiffusion : sigma = 0.
    DegenerateRoots : complex or (nearly) coincident roots.
    """
    if p.sigma == 0:
        raise NoDiffusion("the closed-form oracle requires sigma > 0")
    if not (r > 0):
        raise NonPositive(f"discount rate r must be > 0, got {r}")

    half_s2 = 0.5 * p.sigma**2
    coeffs = [
        half_s2,
        p.c + half_s2 * p.mu,
        p.c * p.mu - p.lam - r,
        -r * p.mu,
    ]
    raw = np.roots(coeffs)
    if np.max(np.abs(raw.imag)) > 1e-8 * max(1.0, np.max(np.abs(raw.real))):
        raise DegenerateRoots(f"complex Lundberg roots {raw} for params {p}, r={r}")
    roots = np.sort(raw.real)[::-1]

    scale = max(1.0, abs(r))
    polished = []
    for s in roots:
        if abs(s + p.mu) < 1e-9 and p.lam == 0:
            polished.append(-p.mu)  # spurious factor of the cleared cubic
            continue
        for _ in range(60):
            f = float(psi(p, s)) - r
            if abs(f) <= 1e-13 * scale:
                break
            s = s - f / float(psi_prime(p, s))
        if abs(float(psi(p, s)) - r) > _PSI_RESIDUAL_TOL * scale:
            raise DegenerateRoots(
                f"Newton polish failed to reach the psi residual tolerance at s={s}"
            )
        polished.append(float(s))
    roots = tuple(sorted(polished, reverse=True))

    if not (roots[0] > 0 > roots[1] > roots[2]):
        raise DegenerateRoots(f"expected s_1 > 0 > s_2 > s_3, got {roots}")
    gap = min(roots[0] - roots[1], roots[1] - roots[2])
    if gap <= 1e-8 * max(abs(x) for x in roots):
        raise DegenerateRoots(f"nearly coincident roots {roots}")
    return LundbergRoots(roots=roots, params=p, r=float(r))


def _scale_function(roots):
    p = roots.params
    coeff = []
    for s, ok in zip(roots.roots, roots.genuine()):
        coeff.append(1.0 / float(psi_prime(p, s)) if ok else 0.0)
    sf = ScaleFunction(roots=roots, coefficients=tuple(coeff))
    w0 = float(sf.eval(0.0, order=0))
    w1 = float(sf.eval(0.0, order=1))
    two_over_s2 = 2.0 / p.sigma**2
    if abs(w0) > 1e-9 * two_over_s2:
        raise DegenerateRoots(f"scale identity W(0)=0 failed: got {w0}")
    if abs(w1 - two_over_s2) > 1e-8 * two_over_s2:
        raise DegenerateRoots(f"scale identity W'(0)=2/sigma^2 failed: got {w1}")
    return sf


def scale_eval(roots, x, order=0):
    """Evaluate W (order=0), W' (order=1), or W'' (order=2) at x >= 0."""
    if np.any(np.asarray(x) < 0):
        raise DomainError("scale function is evaluated on x >= 0 only")
    return _scale_function(roots).eval(x, order)


def true_value(roots, u, b):
    """V(u; b) = W(u)/W'(b): expected discounted dividends of the barrier-b
    strategy started at u, for 0 <= u <= b."""
    if not (0 <= u <= b):
        raise DomainError(f"need 0 <= u <= b, got u={u}, b={b}")
    sf = _scale_function(roots)
    return float(sf.eval(u, 0) / sf.eval(b, 1))


def optimal_barrier(roots):
    """The unique root b* of W''(b) = 0.

    Bracket by geometric scan over [1e-6, 1e3], bisect, then Newton with W'''
    to machine-level |db| < 1e-12.

    Raises
    ------
    BracketNotFound : W'' does not change sign on the scan range.
    """
    sf = _scale_function(roots)

    def w2(b):
        return float(sf.eval(b, 2))

    grid = np.geomspace(1e-6, 1e3, 200)
    vals = sf.eval(grid, 2)
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if len(sign_change) == 0:
        raise BracketNotFound(
            "W'' has no sign change on [1e-6, 1e3]; barrier strategies may be "
            "degenerate for these parameters"
        )
    lo, hi = float(grid[sign_change[0]]), float(grid[sign_change[0] + 1])
    flo = w2(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = w2(mid)
        if fmid == 0.0:
            lo = hi = mid
            break
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo < 1e-9 * max(1.0, hi):
            break
    b = 0.5 * (lo + hi)
    for _ in range(60):
        step = w2(b) / float(sf.eval(b, 3))
        b -= step
        if abs(step) < 1e-12 * max(1.0, abs(b)):
            break
    return float(b)


def oracle_result(p, r):
    """Solve the whole closed form once: roots, scale function, b*."""
    roots = lundberg_roots(p, r)
    return OracleResult(roots=roots, scale=_scale_function(roots), b_star=optimal_barrier(roots))
