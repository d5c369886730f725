import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import kve

from fnig.errors import DomainError
from fnig.special import (
    bessel_k,
    bessel_k_asymptotic,
    bessel_k_scaled,
    log_bessel_k_scaled,
    log_gamma,
    power_bessel_term,
)

from conftest import bessel_k_quadrature

NU_GRID = [-1.5, -0.9, -0.5, 0.0, 0.5, 1.0, 1.5, 2.5]
OMEGA_GRID = [0.1, 1.0, 5.0, 20.0]


def test_half_order_closed_form():
    assert bessel_k_scaled(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-14)
    assert bessel_k(0.5, 1.0) == pytest.approx(0.46106850444789443, rel=1e-14)
    for x in (0.01, 0.7, 3.0, 40.0, 1e5):
        assert bessel_k_scaled(0.5, x) == pytest.approx(math.sqrt(math.pi / (2 * x)), rel=1e-14)


def test_order_one_at_one():
    # e * K_1(1) from the integral-representation oracle
    assert bessel_k_scaled(1.0, 1.0) == pytest.approx(1.6361534862632579, rel=1e-13)


def test_three_halves_by_recurrence():
    # K_{3/2}(x) = sqrt(pi/(2x)) e^{-x} (1 + 1/x)
    expected = math.sqrt(math.pi / 4) * math.exp(-2) * 1.5
    assert bessel_k(1.5, 2.0) == pytest.approx(expected, rel=1e-14)
    assert bessel_k(1.5, 2.0) == pytest.approx(0.17990665795209215, rel=1e-14)


@pytest.mark.parametrize("nu", NU_GRID)
@pytest.mark.parametrize("omega", OMEGA_GRID)
def test_matches_integral_representation(nu, omega):
    assert bessel_k(nu, omega) == pytest.approx(bessel_k_quadrature(nu, omega), rel=1e-10)


@pytest.mark.parametrize("omega", [1.5, 1.9, 1.999, 2.0, 2.001, 2.1, 2.5])
@pytest.mark.parametrize("nu", [0.0, 0.3, 0.5, 1.7])
def test_branch_crossover_agrees_with_quadrature(nu, omega):
    assert bessel_k(nu, omega) == pytest.approx(bessel_k_quadrature(nu, omega), rel=1e-10)


def test_agrees_with_scipy_over_wide_range():
    nus = np.linspace(-6, 6, 49)
    omegas = np.geomspace(1e-6, 1e6, 61)
    n, w = np.meshgrid(nus, omegas)
    ours = bessel_k_scaled(n, w)
    assert np.max(np.abs(ours / kve(n, w) - 1)) < 1e-12


def test_symmetric_in_order():
    for nu in NU_GRID + [0.25, 3.3, 4.9]:
        for omega in OMEGA_GRID + [1e-3, 1e3]:
            assert bessel_k(-nu, omega) == pytest.approx(bessel_k(nu, omega), rel=1e-13)


def test_decreasing_in_argument():
    omegas = np.geomspace(1e-3, 50, 200)
    for nu in NU_GRID:
        vals = bessel_k(nu, omegas)
        assert np.all(np.diff(vals) < 0)


def test_scaled_and_unscaled_consistent():
    for nu in NU_GRID:
        for omega in OMEGA_GRID + [100.0]:
            assert bessel_k_scaled(nu, omega) * math.exp(-omega) == pytest.approx(bessel_k(nu, omega), rel=1e-15)


def test_no_overflow_at_large_argument():
    for nu in np.linspace(-5, 5, 21):
        v = bessel_k_scaled(nu, 1e6)
        assert math.isfinite(v) and v > 0
        assert v == pytest.approx(math.sqrt(math.pi / 2e6), rel=1e-4)
    assert bessel_k(1.0, 1e4) == 0.0  # graceful underflow


def test_array_input_broadcasts():
    out = bessel_k_scaled(np.array([0.5, 1.0]), np.array([[1.0], [2.0]]))
    assert out.shape == (2, 2)
    assert out[0, 1] == pytest.approx(1.6361534862632579, rel=1e-13)


@pytest.mark.parametrize("nu, omega", [(0.5, 0.0), (0.5, -1.0), (math.nan, 1.0), (1.0, math.inf)])
def test_domain_errors(nu, omega):
    with pytest.raises(DomainError):
        bessel_k_scaled(nu, omega)


@given(nu=st.floats(0.0, 4.0), omega=st.floats(1e-3, 1e3))
@settings(max_examples=200, deadline=None)
def test_three_term_recurrence(nu, omega):
    # K_{nu+1} = K_{nu-1} + (2 nu / omega) K_nu holds for the scaled functions too;
    # nu >= 0 keeps both terms positive (negative orders follow by symmetry)
    lhs = bessel_k_scaled(nu + 1, omega)
    rhs = bessel_k_scaled(nu - 1, omega) + 2 * nu / omega * bessel_k_scaled(nu, omega)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_asymptotic_half_order_exact():
    for omega in (0.3, 1.0, 7.0):
        assert bessel_k_asymptotic(0.5, omega, 1) == pytest.approx(bessel_k(0.5, omega), rel=1e-14)
        assert bessel_k_asymptotic(0.5, omega, 5) == pytest.approx(bessel_k(0.5, omega), rel=1e-14)


def test_asymptotic_large_argument():
    assert bessel_k_asymptotic(1.0, 50.0, 4) == pytest.approx(3.4441022267175596e-23, rel=1e-6)


def test_asymptotic_small_argument_is_finite():
    # no accuracy contract at small argument; both truncations are finite numbers
    assert math.isfinite(bessel_k_asymptotic(1.0, 1.0, 4))
    assert math.isfinite(bessel_k_asymptotic(1.0, 1.0, 2))


def test_asymptotic_needs_terms():
    with pytest.raises(DomainError):
        bessel_k_asymptotic(1.0, 10.0, 0)


def test_log_gamma_values():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert log_gamma(3.5) == pytest.approx(math.log(15 * math.sqrt(math.pi) / 8), rel=1e-14)
    assert log_gamma(3.5) == pytest.approx(1.2009736023470738, rel=1e-14)


@given(st.floats(0.05, 50.0))
def test_log_gamma_recurrence(x):
    assert log_gamma(x + 1) == pytest.approx(log_gamma(x) + math.log(x), rel=1e-12, abs=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_power_bessel_term_zero_limit():
    assert power_bessel_term(0.0, 0.8, 1.0) == 0.0
    small = power_bessel_term(np.array([0.0, 1e-8, 1e-4]), 0.8, 1.0)
    assert small[0] == 0.0 and 0 < small[1] < small[2]


@pytest.mark.parametrize("nu", [0.0, 0.3, 1.0, 2.7])
def test_log_scaled_matches_direct_log(nu):
    for x in (1e-8, 0.5, 3.0, 1e4):
        assert log_bessel_k_scaled(nu, x) == pytest.approx(math.log(kve(nu, x)), rel=1e-12, abs=1e-13)


def test_log_scaled_finite_where_k_overflows():
    # K_nu(z) ~ Gamma(nu)/2 (2/z)^nu as z -> 0
    nu, z = 2.3, 1e-200
    expected = math.lgamma(nu) - math.log(2.0) + nu * math.log(2.0 / z)
    assert log_bessel_k_scaled(nu, z) == pytest.approx(expected, rel=1e-14)


def test_smallest_subnormal_argument():
    assert math.isfinite(bessel_k_scaled(0.2, 5e-324))
    assert power_bessel_term(5e-324, 0.8, 1.0) >= 0
    assert power_bessel_term(np.array([2.2e-311, 1.0]), 0.8, 1.0)[0] == pytest.approx(
        2.2e-311 * math.gamma(1.1) / 2 * 2**1.1, rel=1e-10)
