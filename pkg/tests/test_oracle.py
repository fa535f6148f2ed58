import numpy as np
import pytest

from divbar.errors import DomainError, NoDiffusion, NonPositive
from divbar.levy_model import ModelParams
from divbar.oracle import (
    lundberg_roots,
    optimal_barrier,
    oracle_result,
    psi,
    scale_eval,
    true_value,
)

MODEL = ModelParams(u=10.0, c=15.0, sigma=2.0, lam=5.0, mu=0.5)
R = 0.2


@pytest.fixture(scope="module")
def roots():
    return lundberg_roots(MODEL, R)


@pytest.fixture(scope="module")
def orc():
    return oracle_result(MODEL, R)


def test_roots_ordered_and_residuals_small(roots):
    s1, s2, s3 = roots.roots
    assert s1 > 0 > s2 > s3
    for s in roots.roots:
        assert abs(float(psi(MODEL, s)) - R) < 1e-10


def test_base_model_barrier(orc):
    assert abs(orc.b_star - 12.93958) < 1e-3


def test_scale_function_identities(roots):
    assert abs(scale_eval(roots, 0.0, order=0)) < 1e-9
    assert scale_eval(roots, 0.0, order=1) == pytest.approx(2 / MODEL.sigma**2, rel=1e-8)
    # strictly increasing on a wide grid
    xs = np.linspace(0.0, 60.0, 500)
    w = scale_eval(roots, xs, order=0)
    assert np.all(np.diff(w) > 0)


def test_scale_derivative_consistency(roots):
    x, eps = 5.0, 1e-5
    fd = (scale_eval(roots, x + eps) - scale_eval(roots, x - eps)) / (2 * eps)
    assert fd == pytest.approx(float(scale_eval(roots, x, order=1)), rel=1e-6)
    fd2 = (scale_eval(roots, x + eps, 1) - scale_eval(roots, x - eps, 1)) / (2 * eps)
    assert fd2 == pytest.approx(float(scale_eval(roots, x, order=2)), rel=1e-6)


def test_scale_eval_rejects_negative_x(roots):
    with pytest.raises(DomainError):
        scale_eval(roots, -0.1)


def test_optimal_barrier_is_second_derivative_root(roots, orc):
    b = orc.b_star
    assert abs(float(scale_eval(roots, b, order=2))) < 1e-9
    assert float(scale_eval(roots, b - 0.1, order=2)) * float(
        scale_eval(roots, b + 0.1, order=2)) < 0


def test_value_unimodal_and_peaks_at_b_star(roots, orc):
    b = orc.b_star
    grid = np.linspace(MODEL.u, 3 * b, 2000)
    v = np.array([true_value(roots, MODEL.u, g) for g in grid])
    k = int(np.argmax(v))
    assert abs(grid[k] - b) <= grid[1] - grid[0]
    assert np.all(np.diff(v[: k + 1]) > 0)
    assert np.all(np.diff(v[k + 1:]) < 0)


def test_true_value_basics(roots, orc):
    # W(0) = 0 only up to cancellation of the three exponential weights
    assert abs(true_value(roots, 0.0, 13.0)) < 1e-12
    with pytest.raises(DomainError):
        true_value(roots, 14.0, 13.0)
    # increasing in the starting level at a fixed barrier
    us = np.linspace(0.0, 12.9, 200)
    vals = np.array([true_value(roots, u, 12.95) for u in us])
    assert np.all(np.diff(vals) > 0)
    assert orc.value_at(10.0, orc.b_star) > orc.value_at(10.0, 11.0)


def test_pure_diffusion_roots_match_quadratic_formula():
    # lam = 0: psi(s) = c s + (sigma^2/2) s^2, so the genuine roots come from
    # the quadratic; clearing the jump denominator adds a spurious s = -mu
    # which must carry scale weight exactly 0.
    p = ModelParams(u=10.0, c=15.0, sigma=2.0, lam=0.0, mu=0.5)
    roots = lundberg_roots(p, R)
    disc = np.sqrt(p.c**2 + 2 * p.sigma**2 * R)
    s_plus = (-p.c + disc) / p.sigma**2
    s_minus = (-p.c - disc) / p.sigma**2
    assert roots.roots[0] == pytest.approx(s_plus, rel=1e-12)
    assert roots.roots[1] == -p.mu
    assert roots.roots[2] == pytest.approx(s_minus, rel=1e-12)
    assert list(roots.genuine()) == [True, False, True]

    orc = oracle_result(p, R)
    assert orc.scale.coefficients[1] == 0.0
    b_closed = np.log(s_minus**2 / s_plus**2) / (s_plus - s_minus)
    assert orc.b_star == pytest.approx(b_closed, rel=1e-9)


def test_small_rate_root_approaches_zero():
    # psi(0) = 0, so the positive root scales like r / psi'(0)
    roots = lundberg_roots(MODEL, 1e-8)
    assert 0 < roots.roots[0] < 1e-7


def test_time_rescaling_leaves_barrier_invariant():
    # speeding time up by kappa multiplies (c, lam, r) by kappa and sigma by
    # sqrt(kappa) but cannot move the optimal barrier (a currency quantity)
    kappa = 2.0
    fast = ModelParams(u=MODEL.u, c=MODEL.c * kappa, sigma=MODEL.sigma * np.sqrt(kappa),
                       lam=MODEL.lam * kappa, mu=MODEL.mu)
    b_fast = oracle_result(fast, R * kappa).b_star
    b_base = oracle_result(MODEL, R).b_star
    assert b_fast == pytest.approx(b_base, rel=1e-9)


def test_sigma_zero_rejected():
    p = ModelParams(u=10.0, c=15.0, sigma=0.0, lam=5.0, mu=0.5)
    with pytest.raises(NoDiffusion):
        lundberg_roots(p, R)
    with pytest.raises(NonPositive):
        lundberg_roots(MODEL, 0.0)


def test_oracle_result_bundle(orc):
    assert orc.b_star == optimal_barrier(orc.roots)
    assert len(orc.scale.coefficients) == 3
    v = orc.value_at(10.0, orc.b_star)
    assert v > 0
