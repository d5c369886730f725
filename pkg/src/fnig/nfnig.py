"""n-th order FNIG process X^n(t) = B^n_H(G(t)), H in (n - 1, n).

Its covariance is E G_{H,n}(G(t), G(s)), the n-FBM kernel averaged over the
subordinator. For s < t the kernel needs three kinds of IG expectations:

* E (G(t) - G(s))^2H, a single IG moment;
* E G(t)^j G(s)^(2H-j), j < n: expand G(t)^j = (G(s) + D)^j binomially with D
  independent of G(s), giving a finite sum of products of IG moments;
* E G(s)^j G(t)^(2H-j): the non-integer power sits on the later time, so no
  finite expansion exists; evaluated by a 2-d product rule over the
  independent pair (G(s), D).
"""

from functools import lru_cache
import math

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureError
from .fbm import c_coeff, gbinom, nfbm_sigma2
from .ig import ig_expectation_rule, ig_moment
from .params import IgParams, NFnigParams
from .special import bessel_k_scaled

RULE_NODES = 801


def _check_order(j: int, p: NFnigParams):
    if int(j) != j or not 0 <= j <= p.n - 1:
        raise DomainError(f"j must be an integer in [0, {p.n - 1}], got {j}")


def ig_cross_moment(j: int, t: float, s: float, p: NFnigParams) -> float:
    """E G(t)^j G(s)^(2H-j) for 0 < s < t:

    (2/pi) ab (alpha/beta)^2H sum_k C(j,k) e^{ab(t-s)}K_{k-1/2}(ab(t-s)) e^{ab s}K_{2H-k-1/2}(ab s)
    (t-s)^(k+1/2) s^(2H-k+1/2).
    """
    _check_order(j, p)
    if not 0 < s < t:
        raise DomainError("ig_cross_moment needs 0 < s < t")
    ab = p.ab
    h2 = 2.0 * p.H
    u = t - s
    total = 0.0
    for k in range(j + 1):
        total += (
            math.comb(j, k)
            * bessel_k_scaled(k - 0.5, ab * u)
            * bessel_k_scaled(h2 - k - 0.5, ab * s)
            * u ** (k + 0.5)
            * s ** (h2 - k + 0.5)
        )
    return 2.0 / math.pi * ab * (p.alpha / p.beta) ** h2 * total


def ig_lagging_cross_moment(j: int, t: float, s: float, p: NFnigParams, n_nodes: int = RULE_NODES) -> float:
    """E G(s)^j G(t)^(2H-j) for 0 < s < t (the power 2H - j is on the later time)."""
    _check_order(j, p)
    if not 0 < s < t:
        raise DomainError("ig_lagging_cross_moment needs 0 < s < t")
    h2 = 2.0 * p.H
    if j == 0:
        return ig_moment(h2, IgParams(p.alpha * t, p.beta))
    power = h2 - j
    g, wg = ig_expectation_rule(IgParams(p.alpha * s, p.beta), n_nodes, max_power=h2)
    d, wd = ig_expectation_rule(IgParams(p.alpha * (t - s), p.beta), n_nodes, max_power=power)
    inner = ((g[:, None] + d[None, :]) ** power) @ wd
    return float(np.dot(wg * g**j, inner))


def _sum_moment(p: NFnigParams, t: float) -> float:
    return ig_moment(2.0 * p.H, IgParams(p.alpha * t, p.beta))


def _nfnig_cov_scalar(t: float, s: float, p: NFnigParams) -> float:
    if t < 0 or s < 0:
        raise DomainError("covariance needs t, s >= 0")
    if t == 0 or s == 0:
        return 0.0
    if t == s:
        return nfbm_sigma2(p.kernel) * _sum_moment(p, t)
    if t < s:
        t, s = s, t
    h2 = 2.0 * p.H
    first = ig_moment(h2, IgParams(p.alpha * (t - s), p.beta))
    poly = 0.0
    for j in range(p.n):
        poly += (-1) ** j * gbinom(h2, j) * (ig_cross_moment(j, t, s, p) + ig_lagging_cross_moment(j, t, s, p))
    return (-1) ** p.n * 0.5 * c_coeff(p.n, p.H) * (first - poly)


def nfnig_cov(t, s, p: NFnigParams):
    """E X^n(t) X^n(s) = E G_{H,n}(G(t), G(s)); broadcasts over t and s."""
    t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    if t.ndim == 0:
        return _nfnig_cov_scalar(float(t), float(s), p)
    return np.array([_nfnig_cov_scalar(float(a), float(b), p) for a, b in zip(t.ravel(), s.ravel())]).reshape(t.shape)


def difference_weights(n: int) -> np.ndarray:
    """Coefficients of the n-th forward difference: (-1)^(n-i) C(n, i), i = 0..n."""
    return np.array([(-1) ** (n - i) * math.comb(n, i) for i in range(n + 1)], dtype=float)


def nfnign_cov(tau: float, p: NFnigParams, start: float = 0.0) -> float:
    """Covariance of the n-th order increments Y(u) = Delta^n_eta X^n(u) at
    times start + |tau| and start:

    sum_{i,l} c_i c_l E X^n(start + |tau| + i eta) X^n(start + l eta).

    With start = 0 this is cov(W_1, W_{1+k}) of the sampled noise at tau = k eta.
    """
    if start < 0:
        raise DomainError("start time must be >= 0")
    tau = abs(float(tau))
    c = difference_weights(p.n)
    eta = p.eta

    @lru_cache(maxsize=None)
    def cov(a: float, b: float) -> float:
        return _nfnig_cov_scalar(a, b, p)

    total = 0.0
    for i, ci in enumerate(c):
        for l, cl in enumerate(c):
            a = start + tau + i * eta
            b = start + l * eta
            total += ci * cl * cov(max(a, b), min(a, b))
    return total


def subordinated_lag_nfgn_cov(tau: float, p: NFnigParams) -> float:
    """n-th order fGn covariance with the lag replaced by the IG time G(|tau|)
    and the step kept at eta:

    (-1)^n (C/2) sum_j (-1)^j C(2n, n+j) E|G(|tau|) + j eta|^2H,

    each expectation an adaptive quadrature of the IG(alpha |tau|, beta) density.
    This is a different quantity from :func:`nfnign_cov` (it does not reduce to
    the FNIG noise covariance at n = 1); kept for comparison.
    """
    tau = abs(float(tau))
    if tau == 0:
        raise DomainError("tau must be non-zero")
    a, b = p.alpha * tau, p.beta
    h2 = 2.0 * p.H
    log_pref = math.log(a) - 0.5 * math.log(2 * math.pi) + a * b
    total = 0.0
    for j in range(-p.n, p.n + 1):
        shift = j * p.eta

        def integrand(u):
            y = math.exp(u)
            return abs(y + shift) ** h2 * math.exp(log_pref - 0.5 * u - 0.5 * (a * a / y + b * b * y))

        mode = math.log(a / b)
        lo, hi = mode - 40.0, mode + 40.0
        pts = [math.log(-shift)] if shift < 0 and lo < math.log(-shift) < hi else None
        val, err = quad(integrand, lo, hi, points=pts, epsabs=0.0, epsrel=1e-10, limit=400)
        if err > 1e-8 * abs(val):
            raise QuadratureError(f"quadrature failed for j={j}: value {val}, error {err}")
        total += (-1) ** j * math.comb(2 * p.n, p.n + j) * val
    return (-1) ** p.n * 0.5 * c_coeff(p.n, p.H) * total
