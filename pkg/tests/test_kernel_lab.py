import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from chardisc.errors import DomainExceeded
from chardisc.kernel_lab import (
    KernelParams,
    ResidualField,
    _chebyshev_coeffs,
    antiderivative_h,
    chebyshev_T,
    integral_operator_residual,
    kernel_fk,
    kernel_mass_inner,
    kernel_poly,
    kernel_tail,
    sphere_volume,
    sup_h_bound,
    sup_h_check,
)
from chardisc.polynomial import MultiPoly, parse_poly
from chardisc.root_system import build_tables
from chardisc.sampling import constant_sequence, sample_haar


def test_params_validation():
    with pytest.raises(ValueError):
        KernelParams(1, 2, 4)
    assert KernelParams(2, 3, 5).exponent == 4
    assert KernelParams(3, 6, 3).exponent == 4
    assert KernelParams(1, 2, 3).exponent == 2


def test_chebyshev_examples():
    p = KernelParams(1, 2, 3)
    assert chebyshev_T(p, 0.0) == 0.0
    assert chebyshev_T(p, 4.0) == pytest.approx(1.0)
    assert chebyshev_T(p, 2.0) == pytest.approx(-1.0)
    with pytest.raises(DomainExceeded):
        chebyshev_T(p, 4.1)


@pytest.mark.parametrize("k", [1, 3, 5, 9, 11])
def test_chebyshev_matches_recurrence(k):
    p = KernelParams(2, 3, k)
    y = np.random.default_rng(k).uniform(-p.scale, p.scale, 20)
    u = y / p.scale
    prev, cur = np.ones_like(u), u
    for _ in range(k - 1):
        prev, cur = cur, 2 * u * cur - prev
    np.testing.assert_allclose(chebyshev_T(p, y), cur, atol=1e-10)
    assert np.polynomial.polynomial.polyval(0.3, _chebyshev_coeffs(k)) == pytest.approx(math.cos(k * math.acos(0.3)))


def test_kernel_examples():
    assert kernel_fk(KernelParams(1, 2, 3), [0.0]) == pytest.approx(0.5625)
    assert kernel_fk(KernelParams(2, 3, 3), [0.0, 0.0]) == pytest.approx(1 / 64)
    p = KernelParams(1, 2, 5)
    zero = p.scale * math.cos(math.pi / (2 * 5))  # a root of T_5
    assert kernel_fk(p, [zero]) == pytest.approx(0.0, abs=1e-20)
    # continuity at the origin ball edge
    assert kernel_fk(p, [2e-8]) == pytest.approx(kernel_fk(p, [0.0]), rel=1e-6)


@pytest.mark.parametrize("r,M,k", [(1, 2, 3), (1, 2, 9), (2, 3, 3), (2, 3, 5), (2, 5, 9)])
def test_kernel_is_polynomial_in_rho_squared(r, M, k):
    p = KernelParams(r, M, k)
    rho = np.linspace(0.0, p.scale, 200)
    vals = kernel_fk(p, np.column_stack([rho] + [np.zeros_like(rho)] * (r - 1)))
    deg = (1 + r // 2) * (k - 1)
    z = (rho / p.scale) ** 2
    coef = np.polynomial.polynomial.polyfit(z, vals, deg)
    fit = np.polynomial.polynomial.polyval(z, coef)
    assert np.max(np.abs(fit - vals)) <= 1e-8 * max(1.0, vals.max())
    # exact expansion agrees with the trig form
    x = np.random.default_rng(0).uniform(-M, M, (25, r))
    np.testing.assert_allclose(kernel_poly(p).evaluate(x), kernel_fk(p, x), rtol=1e-9, atol=1e-12)
    assert kernel_poly(p).degree == 2 * (1 + r // 2) * (k - 1)


def test_sphere_volume():
    assert sphere_volume(1) == 2.0
    assert sphere_volume(2) == pytest.approx(2 * math.pi)
    assert sphere_volume(3) == pytest.approx(4 * math.pi)
    assert sphere_volume(4) == pytest.approx(2 * math.pi**2)


@pytest.mark.parametrize("r,M", [(1, 2), (2, 3)])
@pytest.mark.parametrize("k", [3, 5, 9])
@pytest.mark.parametrize("cf", [0.5, 1.0, 1.2])
def test_sandwich_and_tail(r, M, k, cf):
    p = KernelParams(r, M, k)
    c = cf * p.m_sqrt_r
    inner = kernel_mass_inner(p, c)
    assert inner.holds and inner.lower_margin >= 0 and inner.upper_margin >= 0
    tail = kernel_tail(p, c / k)
    assert tail.holds and tail.margin >= 0


@pytest.mark.parametrize("r,M,k,cf", [(1, 2, 3, 1.0), (2, 3, 5, 0.5), (1, 2, 9, 1.2)])
def test_radial_quadrature_against_scipy(r, M, k, cf):
    p = KernelParams(r, M, k)
    c = cf * p.m_sqrt_r

    def integrand(rho):
        return float(kernel_fk(p, np.array([rho] + [0.0] * (r - 1)))) * rho ** (r - 1)

    ref, _ = integrate.quad(integrand, 0, c / k, epsabs=0, epsrel=1e-12, limit=200)
    assert kernel_mass_inner(p, c).integral == pytest.approx(sphere_volume(r) * ref, rel=1e-9)
    tref, _ = integrate.quad(integrand, c / k, p.scale, epsabs=0, epsrel=1e-12, limit=400)
    assert kernel_tail(p, c / k).integral == pytest.approx(sphere_volume(r) * tref, rel=1e-8)


def test_tail_at_outer_radius_is_empty():
    p = KernelParams(1, 2, 3)
    assert kernel_tail(p, p.scale).integral == 0.0
    with pytest.raises(DomainExceeded):
        kernel_mass_inner(p, 1.3 * p.m_sqrt_r)
    with pytest.raises(DomainExceeded):
        kernel_tail(p, 0.0)


def test_antiderivative_examples():
    assert antiderivative_h(MultiPoly.constant(1, 1), 1, 2) == parse_poly("x1 - 2", 1)
    M = Fraction(7, 3)
    expect = (MultiPoly.variable(2, 0) - M) * (MultiPoly.variable(2, 1) - M)
    assert antiderivative_h(MultiPoly.constant(2, 1), 2, M) == expect
    assert antiderivative_h(MultiPoly(1), 1, 2).is_zero()


def rational_polys(m):
    coef = st.fractions(min_value=-5, max_value=5, max_denominator=7)
    exps = st.lists(st.integers(0, 6), min_size=m, max_size=m).map(tuple).filter(lambda e: sum(e) <= 6)
    return st.dictionaries(exps, coef, min_size=1, max_size=6).map(lambda d: MultiPoly(m, d))


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_antiderivative_properties(data):
    m = data.draw(st.integers(1, 3))
    f = data.draw(rational_polys(m))
    M = data.draw(st.fractions(min_value=Fraction(1, 2), max_value=20, max_denominator=5))
    h = antiderivative_h(f, m, M)
    assert h.mixed_partial(range(m)) == f
    if not f.is_zero():
        assert h.degree == f.degree + m
    for i in range(m):
        assert h.substitute({i: M}).is_zero()


def test_sup_h_examples():
    res = sup_h_check(KernelParams(1, 2, 3), [0.0])
    assert res.bound == pytest.approx(9.0) and res.holds
    assert sup_h_check(KernelParams(1, 2, 9), [1.5]).holds
    res2 = sup_h_check(KernelParams(2, 3, 3), [0.0, 0.0], gridpoints=21)
    assert res2.holds and res2.bound == pytest.approx(sup_h_bound(KernelParams(2, 3, 3)))
    with pytest.raises(DomainExceeded):
        sup_h_check(KernelParams(1, 2, 3), [2.5])


def test_residual_field_range(grid_for):
    t = build_tables("A2")
    field = ResidualField(grid_for("A2"), sample_haar(t, 50, 1))
    rng = np.random.default_rng(2)
    for x in rng.uniform(-3, 3, (30, 2)):
        assert -1.0 <= field(x) <= 1.0
    assert field([3.0, 3.0]) == pytest.approx(0.0, abs=1e-9)


def test_intop_examples(grid_for):
    t = build_tables("A1")
    g = grid_for("A1")
    single = constant_sequence(t, 1, [math.pi / 2])
    res = integral_operator_residual(t, g, single, parse_poly("x1^2", 1))
    assert res.rhs == pytest.approx(-1.0, abs=1e-9)
    assert res.residual <= 1e-3
    const = integral_operator_residual(t, g, single, parse_poly("1", 1))
    assert const.residual <= 1e-12


def test_intop_needs_marginal_terms_in_rank_two(grid_for):
    t = build_tables("A2")
    seq = sample_haar(t, 100, 3)
    h = parse_poly("x1*x2", 2)
    full = integral_operator_residual(t, grid_for("A2"), seq, h)
    assert full.residual <= 5e-3
    only_top = integral_operator_residual(t, grid_for("A2"), seq, h, full_term_only=True)
    assert only_top.residual > 0.1
    # with a face-vanishing h the top term alone suffices
    hv = antiderivative_h(parse_poly("x1 + x2^2", 2), 2, t.M)
    top = integral_operator_residual(t, grid_for("A2"), seq, hv, full_term_only=True)
    assert top.residual <= 5e-3


def test_intop_converges_with_resolution(grid_for):
    t = build_tables("A1")
    seq = constant_sequence(t, 1, [math.pi / 2])
    h = parse_poly("x1^2", 1)
    coarse = integral_operator_residual(t, grid_for("A1"), seq, h, x_resolution=32).residual
    fine = integral_operator_residual(t, grid_for("A1"), seq, h, x_resolution=64).residual
    assert coarse / fine >= 2
