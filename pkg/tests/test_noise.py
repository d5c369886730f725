import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fnig.analytics import abs_moment, fnig_cov
from fnig.errors import DomainError
from fnig.noise import (
    SeriesSample,
    lamperti_cov,
    lrd_asymptote,
    noise_acf,
    noise_acf_partial_sum,
    noise_cov,
    sample_autocov,
    sign_acf_estimate,
    signs,
)
from fnig.params import FnigParams, NoiseParams
from fnig.streams import substream
from fnig.validate import McConfig, noise_paths


def noise(H, eta=1.0, alpha=1.0, beta=1.0, sigma2=1.0):
    return NoiseParams(eta, FnigParams(alpha, beta, sigma2, H))


NP = noise(0.8, eta=0.7, alpha=1.3, beta=0.9, sigma2=1.4)


def test_noise_variance_is_second_moment():
    for t in (0.0, 1.0, 17.5):
        assert noise_cov(t, t, NP) == abs_moment(2, NP.eta, NP.base)


@pytest.mark.parametrize("d", [0.3, 0.7, 1.0, 2.5, 40.0])
def test_noise_cov_stationary(d):
    ref = noise_cov(d, 0.0, NP)
    for shift in (0.5, 3.0, 100.0):
        assert noise_cov(shift + d, shift, NP) == pytest.approx(ref, rel=1e-12)
        assert noise_cov(shift, shift + d, NP) == pytest.approx(ref, rel=1e-12)


@given(st.floats(0.0, 30.0), st.floats(0.0, 30.0))
@settings(max_examples=60, deadline=None)
def test_noise_cov_is_second_difference_of_process_cov(t, s):
    eta, p = NP.eta, NP.base
    expected = fnig_cov(t + eta, s + eta, p) - fnig_cov(t + eta, s, p) - fnig_cov(t, s + eta, p) + fnig_cov(t, s, p)
    assert noise_cov(t, s, NP) == pytest.approx(expected, rel=1e-10, abs=1e-12 * abs_moment(2, eta, p))


def test_acf_consistent_with_noise_cov():
    k = np.arange(0, 60)
    acf = noise_acf(k, NP)
    assert acf[0] == abs_moment(2, NP.eta, NP.base)
    for kk in range(1, 60):
        assert acf[kk] == pytest.approx(noise_cov(NP.eta * kk, 0.0, NP), rel=1e-12)


def test_acf_signs():
    k = np.arange(1, 101)
    assert np.all(noise_acf(k, noise(0.8)) > 0)
    assert np.all(noise_acf(k, noise(0.3)) < 0)


def test_acf_brownian_case_uncorrelated():
    # H = 1/2 gives a Levy process: increments are uncorrelated
    k = np.arange(1, 20)
    assert np.max(np.abs(noise_acf(k, noise(0.5)))) < 1e-12 * noise_acf(0, noise(0.5))


def test_acf_domain():
    with pytest.raises(DomainError):
        noise_acf(-1, NP)
    with pytest.raises(DomainError):
        noise_acf(1.5, NP)


def test_asymptote_vanishes_for_brownian_case():
    assert lrd_asymptote(10, noise(0.5)) == 0.0


@pytest.mark.parametrize("H", [0.7, 0.3, 0.9])
def test_acf_approaches_asymptote(H):
    k = 1e4
    ratio = noise_acf(k, noise(H)) / lrd_asymptote(k, noise(H))
    assert abs(ratio - 1) < 0.01


def test_acf_approaches_fgn_covariance():
    # alpha = beta, eta = 1: gamma(k) against the fGn covariance with unit variance
    H = 0.75
    k = 1e4
    fgn = 0.5 * ((k + 1) ** (2 * H) + (k - 1) ** (2 * H) - 2 * k ** (2 * H))
    assert abs(noise_acf(k, noise(H, alpha=2.0, beta=2.0)) / fgn - 1) < 0.01


def test_partial_sums_two_routes():
    np_ = noise(0.8, eta=0.5, alpha=2.0)
    direct = math.fsum(noise_acf(np.arange(1, 1001), np_))
    assert noise_acf_partial_sum(1000, np_) == pytest.approx(direct, rel=1e-10)


def test_partial_sums_growth_rate():
    H = 0.8
    K = np.geomspace(1e3, 1e5, 21)
    s = noise_acf_partial_sum(K, noise(H))
    slope = np.polyfit(np.log(K), np.log(s), 1)[0]
    assert abs(slope - (2 * H - 1)) < 0.05


def test_partial_sums_unbounded():
    K = np.geomspace(10, 1e6, 30)
    s = noise_acf_partial_sum(K, noise(0.7))
    assert np.all(np.diff(s) > 0)
    # grows at least like a constant times K^{2H-1}
    assert s[-1] > 10 * s[0]


@pytest.mark.parametrize("a", [2.0, 10.0])
def test_lamperti_self_similar(a):
    np_ = noise(0.7, eta=0.6)
    for t, s in [(2.0, 1.0), (5.0, 3.0), (7.0, 7.0), (1.0, 30.0)]:
        assert lamperti_cov(a * t, a * s, np_) == pytest.approx(a ** 1.4 * lamperti_cov(t, s, np_), rel=1e-12)


def test_lamperti_symmetric_and_consistent():
    np_ = noise(0.65, eta=0.4)
    for t, s in [(2.0, 1.0), (5.0, 3.0), (20.0, 1.5), (4.0, 4.0)]:
        assert lamperti_cov(t, s, np_) == pytest.approx(lamperti_cov(s, t, np_), rel=1e-14)
        expected = (s * t) ** 0.65 * noise_cov(math.log(t), math.log(s), np_)
        assert lamperti_cov(t, s, np_) == pytest.approx(expected, rel=1e-12)


def test_lamperti_domain():
    with pytest.raises(DomainError):
        lamperti_cov(0.0, 1.0, NP)


def test_sample_autocov_definition():
    x = np.array([1.0, -2.0, 0.5, 3.0])
    assert sample_autocov(x, 0, demean=False) == pytest.approx(np.sum(x * x) / 4)
    c = x - x.mean()
    assert sample_autocov(x, 2) == pytest.approx(np.sum(c[:2] * c[2:]) / 4)
    with pytest.raises(DomainError):
        sample_autocov(x, 4)


def test_sign_acf_constant_series():
    series = SeriesSample(np.full(50, 2.3))
    for k in (0, 1, 10):
        assert sign_acf_estimate(series, k) == 0.0


def test_sign_acf_alternating_series():
    series = SeriesSample(np.tile([1.0, -1.0], 5000))
    assert sign_acf_estimate(series, 1) == pytest.approx(-1.0, abs=1e-3)


def test_sign_of_zero_is_zero():
    assert np.array_equal(signs([-2.0, 0.0, 3.0]), [-1.0, 0.0, 1.0])


def test_sign_acf_domain():
    with pytest.raises(DomainError):
        sign_acf_estimate(SeriesSample([1.0, 2.0]), 2)
    with pytest.raises(DomainError):
        SeriesSample([])


def test_sign_persistence_simulated():
    # sign autocovariances of the H = 0.8 noise are positive, so their partial sums grow;
    # averaged over independent 3000-step series
    cfg = McConfig(2, 3000, 401, path_replicates=20)
    w = noise_paths(noise(0.8), cfg, substream(401))
    K = 20
    acf = np.mean([[sign_acf_estimate(SeriesSample(row), k) for k in range(1, K + 1)] for row in w], axis=0)
    partial = np.cumsum(acf)
    assert np.all(np.diff(partial) > 0)
