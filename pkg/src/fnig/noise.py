"""FNIG noise: the stationary increments Y(t) = X(t + eta) - X(t).

All covariances here are second differences of the variance curve
m(u) = E X(u)^2 = 2c psi(u), psi(u) = u^(2H+1/2) e^{ab u} K_{1/2-2H}(ab u),
c = sigma^2 alpha (alpha/beta)^(2H-1/2) / sqrt(2 pi).
"""

from dataclasses import dataclass
import math

import numpy as np

from .analytics import _cov_prefactor, abs_moment
from .errors import DomainError
from .params import NoiseParams
from .special import power_bessel_term


def _psi(u, np_: NoiseParams):
    b = np_.base
    return power_bessel_term(u, b.H, b.alpha * b.beta)


def _second_difference(d, np_: NoiseParams):
    """c [psi(|d + eta|) + psi(|d - eta|) - 2 psi(|d|)]."""
    eta = np_.eta
    d = np.abs(np.asarray(d, dtype=float))
    return _cov_prefactor(np_.base) * (_psi(d + eta, np_) + _psi(np.abs(d - eta), np_) - 2.0 * _psi(d, np_))


def _out(x):
    x = np.asarray(x, dtype=float)
    return x if x.ndim else float(x)


def noise_cov(t, s, np_: NoiseParams):
    """E Y(t) Y(s); depends on |t - s| only. Equal times give E X(eta)^2."""
    np_.base.require_drift()
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise DomainError("noise covariance needs t, s >= 0")
    out = np.asarray(_second_difference(t - s, np_), dtype=float)
    if np.any(t == s):
        out = np.where(np.broadcast_to(t == s, out.shape), abs_moment(2, np_.eta, np_.base), out)
    return _out(out)


def noise_acf(k, np_: NoiseParams):
    """gamma(k) = cov(W_j, W_{j+k}) of the sampled noise W_j = Y(eta (j - 1)).

    gamma(0) = E X(eta)^2; the psi(0) term met at k = 1 is 0.
    """
    np_.base.require_drift()
    k = np.asarray(k)
    if np.any(k < 0) or np.any(k != np.round(k)):
        raise DomainError("lag k must be a non-negative integer")
    out = np.asarray(_second_difference(np_.eta * k.astype(float), np_), dtype=float)
    if np.any(k == 0):
        out = np.where(k == 0, abs_moment(2, np_.eta, np_.base), out)
    return _out(out)


def noise_acf_partial_sum(K, np_: NoiseParams):
    """sum_{k=1}^{K} gamma(k), by telescoping: c [psi(eta(K+1)) - psi(eta K) - psi(eta)]."""
    np_.base.require_drift()
    K = np.asarray(K, dtype=float)
    if np.any(K < 1):
        raise DomainError("partial sums need K >= 1")
    eta = np_.eta
    c = _cov_prefactor(np_.base)
    return _out(c * (_psi(eta * (K + 1), np_) - _psi(eta * K, np_) - _psi(eta, np_)))


def lrd_asymptote(k, np_: NoiseParams):
    """Large-lag equivalent sigma^2 (alpha/beta)^2H eta^2H H (2H - 1) k^(2H - 2)."""
    b = np_.base
    k = np.asarray(k, dtype=float)
    if np.any(k < 1):
        raise DomainError("asymptote is stated for k >= 1")
    H = b.H
    return _out(b.sigma2 * (b.alpha / b.beta) ** (2 * H) * np_.eta ** (2 * H) * H * (2 * H - 1) * k ** (2 * H - 2))


def lamperti_cov(t, s, np_: NoiseParams):
    """Covariance of the self-similar process W(t) = t^H Y(ln t):
    (st)^H c [psi(|L + eta|) + psi(|L - eta|) - 2 psi(|L|)], L = ln(t/s)."""
    np_.base.require_drift()
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t <= 0) or np.any(s <= 0):
        raise DomainError("Lamperti covariance needs t, s > 0")
    H = np_.base.H
    log_ratio = np.log(t) - np.log(s)
    out = np.asarray((s * t) ** H * _second_difference(log_ratio, np_), dtype=float)
    if np.any(t == s):
        diag = np.broadcast_to(t == s, out.shape)
        out = np.where(diag, np.broadcast_to(t, out.shape) ** (2 * H) * abs_moment(2, np_.eta, np_.base), out)
    return _out(out)


@dataclass
class SeriesSample:
    """Observed noise values (or their signs) at spacing ``spacing``."""

    values: np.ndarray
    spacing: float = 1.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size == 0:
            raise DomainError("a series sample must be a non-empty 1-d sequence")


def sample_autocov(values, k: int, demean: bool = True) -> float:
    """Biased (divide by N) sample autocovariance at lag ``k``.

    ``demean=False`` uses the known mean 0 instead of the sample mean.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if not 0 <= k < n:
        raise DomainError(f"lag {k} must be in [0, {n})")
    if demean:
        x = x - x.mean()
    return math.fsum(x[: n - k] * x[k:]) / n


def signs(values) -> np.ndarray:
    """sgn with sgn(0) = 0."""
    return np.sign(np.asarray(values, dtype=float))


def sign_acf_estimate(series: SeriesSample, k: int) -> float:
    """Biased, mean-centered sample autocovariance of sgn(values) at lag k."""
    if k >= series.values.size:
        raise DomainError(f"lag {k} must be smaller than the series length {series.values.size}")
    return sample_autocov(signs(series.values), k, demean=True)
