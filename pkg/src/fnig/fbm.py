"""Covariance kernels of fractional Brownian motion, n-th order FBM and
n-th order fractional Gaussian noise."""

import math

import numpy as np

from .errors import DomainError
from .params import FbmParams, NFbmParams
from .special import log_gamma

# relative gap below which two times are treated as equal
_TIE = 1e-14


def gbinom(x: float, k: int) -> float:
    """Generalized binomial coefficient C(x, k) for real x and integer k >= 0."""
    if k < 0 or int(k) != k:
        raise DomainError(f"binomial lower index must be a non-negative integer, got {k}")
    out = 1.0
    for i in range(int(k)):
        out *= (x - i) / (i + 1)
    return out


def _abs_diff(t, s):
    d = np.abs(t - s)
    return np.where(d < _TIE * np.maximum(t, s), 0.0, d)


def _scalar_or_array(out):
    return out if out.ndim else float(out)


def fbm_cov(t, s, p: FbmParams):
    """E B_H(t) B_H(s) = (sigma^2 / 2)(t^2H + s^2H - |t - s|^2H); broadcasts."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise DomainError("FBM covariance needs t, s >= 0")
    h2 = 2.0 * p.H
    out = 0.5 * p.sigma2 * (t**h2 + s**h2 - _abs_diff(t, s) ** h2)
    return _scalar_or_array(out)


def c_coeff(n: int, H: float) -> float:
    """C_H^n = 1 / (Gamma(2H + 1) |sin(pi H)|) for H in (n-1, n)."""
    NFbmParams(n, H)
    sin = abs(math.sin(math.pi * H))
    if sin == 0:
        raise DomainError("C_H^n is undefined at integer H")
    return math.exp(-log_gamma(2.0 * H + 1.0)) / sin


def nfbm_var(t, p: NFbmParams):
    """Var B_H^n(t) = C_H^n binom(2H - 1, n - 1) t^2H."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("n-FBM variance needs t > 0")
    sigma_n2 = c_coeff(p.n, p.H) * gbinom(2.0 * p.H - 1.0, p.n - 1)
    return _scalar_or_array(sigma_n2 * t ** (2.0 * p.H))


def nfbm_sigma2(p: NFbmParams) -> float:
    return c_coeff(p.n, p.H) * gbinom(2.0 * p.H - 1.0, p.n - 1)


def nfbm_cov(t, s, p: NFbmParams):
    """n-th order FBM covariance G_{H,n}(t, s); broadcasts.

    (-1)^n (C/2) { |t-s|^2H - sum_{j<n} (-1)^j C(2H, j) [t^j s^(2H-j) + s^j t^(2H-j)] }.
    The process is pinned at 0, so the covariance is 0 when either time is 0.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise DomainError("n-FBM covariance needs t, s >= 0")
    n, H = p.n, p.H
    h2 = 2.0 * H
    pos = (t > 0) & (s > 0)
    tt = np.where(pos, t, 1.0)
    ss = np.where(pos, s, 1.0)
    poly = np.zeros(np.broadcast(tt, ss).shape)
    for j in range(n):
        poly = poly + (-1) ** j * gbinom(h2, j) * (tt**j * ss ** (h2 - j) + ss**j * tt ** (h2 - j))
    out = (-1) ** n * 0.5 * c_coeff(n, H) * (_abs_diff(tt, ss) ** h2 - poly)
    return _scalar_or_array(np.where(pos, out, 0.0))


def nfgn_cov(tau, p: NFbmParams):
    """Covariance of n-th order fractional Gaussian noise at lag ``tau``,
    step ``p.l``: (-1)^n (C/2) sum_{j=-n}^{n} (-1)^j C(2n, n+j) |tau + j l|^2H."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("noise covariance is tabulated for tau >= 0 (it is even in tau)")
    n, H = p.n, p.H
    acc = np.zeros_like(tau)
    for j in range(-n, n + 1):
        acc = acc + (-1) ** j * math.comb(2 * n, n + j) * np.abs(tau + j * p.l) ** (2.0 * H)
    return _scalar_or_array((-1) ** n * 0.5 * c_coeff(n, H) * acc)
