"""Marginal analytics of the FNIG process X(t) = B_H(G(t)), G ~ IG subordinator.

X(t) is a normal variance mixture sigma G(t)^H Z, so its density is a
one-dimensional integral over the IG law, its absolute moments factor into
E|Z|^q E G(t)^{qH}, and its covariance follows from the second moments of
X(t), X(s) and X(t) - X(s) =d X(|t - s|).
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import ndtr

from .errors import DomainError, QuadratureError
from .fbm import fbm_cov
from .ig import ig_expectation_rule
from .params import FbmParams, FnigParams, IgParams
from .special import bessel_k_scaled, log_bessel_k_scaled, log_gamma, power_bessel_term

DENSITY_RTOL = 1e-9
# log-drop from the peak beyond which the integrand is ignored (e^-60 ~ 1e-26)
_WINDOW_DROP = 60.0


def _vectorized(fn, x, *args):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return fn(float(x), *args)
    return np.array([fn(float(v), *args) for v in x.ravel()]).reshape(x.shape)


def _density_scalar(x: float, t: float, p: FnigParams) -> float:
    H = p.H
    x2s = x * x / p.sigma2
    a2 = (p.alpha * t) ** 2
    b2 = p.beta**2

    # integrand of the mixture integral after y = e^u, in log form (concave in u)
    def logf(u):
        return -(H + 0.5) * u - 0.5 * (x2s * math.exp(-2 * H * u) + a2 * math.exp(-u) + b2 * math.exp(u))

    def dlogf(u):
        return -(H + 0.5) + H * x2s * math.exp(-2 * H * u) + 0.5 * a2 * math.exp(-u) - 0.5 * b2 * math.exp(u)

    def walk(keep_going, u0, side):
        # step away from u0 with doubling strides while keep_going(u) holds
        step, u = 1.0, u0
        while keep_going(u):
            u = u0 + side * step
            step *= 2.0
            if step > 1e5:
                raise QuadratureError(f"could not bracket the density integrand (x={x}, t={t})")
        return u

    u0 = math.log(p.alpha * t / p.beta)
    lo = walk(lambda u: dlogf(u) <= 0, u0, -1)
    hi = walk(lambda u: dlogf(u) >= 0, u0, +1)
    u_star = brentq(dlogf, lo, hi, xtol=1e-13)
    top = logf(u_star)
    target = top - _WINDOW_DROP
    below = lambda u: logf(u) - target  # noqa: E731
    left = brentq(below, walk(lambda u: below(u) >= 0, u_star, -1), u_star, xtol=1e-12)
    right = brentq(below, u_star, walk(lambda u: below(u) >= 0, u_star, +1), xtol=1e-12)

    val, err, info = quad(
        lambda u: math.exp(logf(u) - top), left, right, epsabs=0.0, epsrel=DENSITY_RTOL / 10,
        limit=200, full_output=True,
    )[:3]
    if err > DENSITY_RTOL * val:
        raise QuadratureError(
            f"density quadrature did not converge: x={x}, t={t}, estimate={val}, "
            f"error={err}, subintervals={info['last']}"
        )
    log_pref = math.log(p.alpha * t / (2 * math.pi * p.sigma)) + p.alpha * p.beta * t
    return math.exp(log_pref + top + math.log(val))


def fnig_density(x, t: float, p: FnigParams):
    """Density of X(t) by adaptive quadrature of its normal-mixture integral.

    Symmetric in x; far tails are evaluated in log space and underflow to 0.
    beta = 0 (which forces H = 1/2) is the Cauchy case.
    """
    if not t > 0:
        raise DomainError("density needs t > 0")
    if p.beta == 0:
        return cauchy_density(x, t, p.alpha, p.sigma)
    return _vectorized(_density_scalar, np.abs(np.asarray(x, dtype=float)), t, p)


def nig_density_closed(x, t: float, p: FnigParams):
    """Closed-form density at H = 1/2 (symmetric NIG):
    (ab t / pi) e^{ab t} K_1((beta/sigma) sqrt(x^2 + alpha^2 t^2 sigma^2)) / sqrt(x^2 + alpha^2 t^2 sigma^2).
    """
    if p.H != 0.5:
        raise DomainError("the closed-form NIG density holds only at H = 1/2")
    p.require_drift()
    if not t > 0:
        raise DomainError("density needs t > 0")
    x = np.asarray(x, dtype=float)
    r = np.sqrt(x * x + (p.alpha * t) ** 2 * p.sigma2)
    z = p.beta / p.sigma * r
    abt = p.alpha * p.beta * t
    out = abt / math.pi * np.exp(abt - z) * bessel_k_scaled(1.0, z) / r
    return out if np.ndim(out) else float(out)


def cauchy_density(x, t: float, alpha: float, sigma: float):
    """beta = 0, H = 1/2 limit: alpha sigma t / (pi (x^2 + alpha^2 sigma^2 t^2))."""
    if not (t > 0 and alpha > 0 and sigma > 0):
        raise DomainError("Cauchy density needs t, alpha, sigma > 0")
    x = np.asarray(x, dtype=float)
    scale = alpha * sigma * t
    out = scale / (math.pi * (x * x + scale * scale))
    return out if out.ndim else float(out)


def fnig_cdf(x, t: float, p: FnigParams, n_nodes: int = 801):
    """P(X(t) <= x) = E Phi(x / (sigma G(t)^H)), the x-integral of the density
    with the order of integration swapped; evaluated with the IG
    expectation rule, vectorized over x."""
    p.require_drift()
    if not t > 0:
        raise DomainError("CDF needs t > 0")
    x = np.asarray(x, dtype=float)
    y, w = ig_expectation_rule(IgParams(p.alpha * t, p.beta), n_nodes, min_power=-p.H)
    scale = 1.0 / (p.sigma * y**p.H)
    flat = x.ravel()
    out = np.empty(flat.size)
    chunk = max(1, 2_000_000 // y.size)
    for i in range(0, flat.size, chunk):
        xs = flat[i:i + chunk]
        # upper tail of |x| keeps relative accuracy in both tails
        tail = ndtr(-np.abs(xs)[:, None] * scale[None, :]) @ w
        out[i:i + chunk] = np.where(xs < 0, tail, 1.0 - tail)
    out = out.reshape(x.shape)
    return out if out.ndim else float(out)


def _log_ig_power_moment(r: float, t: float, p: FnigParams) -> float:
    """log E G(t)^r = log[sqrt(2/pi) alpha (alpha/beta)^(r-1/2) t^(r+1/2) e^{ab t} K_{r-1/2}(ab t)]."""
    abt = p.alpha * p.beta * t
    return (
        0.5 * math.log(2 / math.pi) + math.log(p.alpha) + (r - 0.5) * math.log(p.alpha / p.beta)
        + (r + 0.5) * math.log(t) + log_bessel_k_scaled(r - 0.5, abt)
    )


def abs_moment(q: float, t: float, p: FnigParams) -> float:
    """E|X(t)|^q = c_q sqrt(2/pi) alpha (alpha/beta)^(qH-1/2) t^(qH+1/2) e^{ab t} K_{1/2-qH}(ab t),
    c_q = sqrt(2^q / pi) sigma^q Gamma((1+q)/2)."""
    p.require_drift()
    if q < 0:
        raise DomainError("absolute moments need q >= 0")
    if not t > 0:
        raise DomainError("moments need t > 0")
    if q == 0:
        return 1.0
    log_cq = 0.5 * (q * math.log(2) - math.log(math.pi)) + 0.5 * q * math.log(p.sigma2) + log_gamma((1 + q) / 2)
    return math.exp(log_cq + _log_ig_power_moment(q * p.H, t, p))


def kurtosis(t, p: FnigParams):
    """beta_2(t) = E X^4 / (E X^2)^2
    = 3 sqrt(pi/2) (ab t)^(-1/2) e^{ab t} K_{1/2-4H}(ab t) / (e^{ab t} K_{1/2-2H}(ab t))^2."""
    p.require_drift()
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("kurtosis needs t > 0")
    w = p.alpha * p.beta * t
    out = 3 * math.sqrt(math.pi / 2) / np.sqrt(w) * bessel_k_scaled(0.5 - 4 * p.H, w) / bessel_k_scaled(0.5 - 2 * p.H, w) ** 2
    return out if np.ndim(out) else float(out)


def _cov_prefactor(p: FnigParams) -> float:
    return p.sigma2 / math.sqrt(2 * math.pi) * p.alpha * (p.alpha / p.beta) ** (2 * p.H - 0.5)


def second_moment_curve(x, p: FnigParams):
    """E X(x)^2 as a function of x >= 0 (0 at x = 0); broadcasts."""
    return 2.0 * _cov_prefactor(p) * power_bessel_term(x, p.H, p.alpha * p.beta)


def fnig_cov(t, s, p: FnigParams):
    """E X(t) X(s) = (1/2)[m(t) + m(s) - m(|t - s|)], m(u) = E X(u)^2; broadcasts.

    Equal times return abs_moment(2, t); a zero time gives 0.
    """
    p.require_drift()
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise DomainError("covariance needs t, s >= 0")
    c = _cov_prefactor(p)
    psi = lambda u: power_bessel_term(u, p.H, p.alpha * p.beta)  # noqa: E731
    out = np.asarray(c * (psi(t) + psi(s) - psi(np.abs(t - s))), dtype=float)
    diag = (t == s) & (t > 0)
    if np.any(diag):
        tt = np.broadcast_to(t, out.shape)
        out = np.array(out)
        out[diag] = [abs_moment(2, float(v), p) for v in tt[diag]]
    return out if out.ndim else float(out)


def cov_ratio(t: float, s: float, p: FnigParams) -> float:
    """F(s, t) = E X(t)X(s) / E B_H(t)B_H(s) for alpha = beta and 0 < s < t."""
    if p.alpha != p.beta:
        raise DomainError("covariance equivalence holds for alpha = beta only")
    if not 0 < s < t:
        raise DomainError("need 0 < s < t")
    return fnig_cov(t, s, p) / fbm_cov(t, s, FbmParams(p.H, p.sigma2))


def standardized_density(x, t: float, p: FnigParams):
    """Density of X(t) / sqrt(E X(t)^2) (unit variance)."""
    scale = math.sqrt(abs_moment(2, t, p))
    return scale * fnig_density(scale * np.asarray(x, dtype=float), t, p)
