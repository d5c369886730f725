"""Modified Bessel function of the third kind K_nu(x) for real order, and log-gamma.

The exponentially scaled function ``e^x K_nu(x)`` is the primitive every
moment and covariance formula is built on, since those formulas always pair
``K_nu(x)`` with a compensating ``e^x``.

Algorithm (for |nu| reduced to mu in [-1/2, 1/2)):

* x < 2: Temme's series for K_mu and K_{mu+1}.
* x >= 2: Steed's continued fraction (CF2) for K_mu and K_{mu+1}.
* Upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v to reach the target order,
  which is stable for K.
"""

import math

import numpy as np

from .errors import DomainError

_EPS = 1e-16
_MAXIT = 100_000
_CROSSOVER = 2.0

# Taylor coefficients of 1/Gamma(1 + x) about x = 0 (A&S 6.1.34, index shifted).
_RECIP_GAMMA = (
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
)


def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """Return (gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu)) for |mu| <= 1/2."""
    even = 0.0
    odd = 0.0
    for k in range(len(_RECIP_GAMMA) - 1, -1, -1):
        if k % 2 == 0:
            even = even * mu * mu + _RECIP_GAMMA[k]
        else:
            odd = odd * mu * mu + _RECIP_GAMMA[k]
    # 1/Gamma(1 +- mu) = even(mu^2) +- mu * odd(mu^2)
    gampl = even + mu * odd
    gammi = even - mu * odd
    return -odd, even, gampl, gammi


def _k_pair_temme(mu: float, x: float) -> tuple[float, float]:
    """K_mu(x), K_{mu+1}(x) by Temme's series; x < 2, |mu| <= 1/2."""
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
    d = math.log(2.0) - math.log(x)  # x2 itself can underflow to 0
    e = mu * d
    fact2 = 1.0 if abs(e) < _EPS else math.sinh(e) / e
    gam1, gam2, gampl, gammi = _temme_gammas(mu)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    d = x2 * x2
    total1 = p
    mu2 = mu * mu
    for i in range(1, _MAXIT):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if abs(delta) < abs(total) * _EPS:
            break
    else:
        raise ArithmeticError(f"Temme series did not converge (mu={mu}, x={x})")
    return total, total1 * 2.0 / x


def _k_pair_cf2_scaled(mu: float, x: float) -> tuple[float, float]:
    """e^x K_mu(x), e^x K_{mu+1}(x) by Steed's CF2; x >= 2, |mu| <= 1/2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:
        raise ArithmeticError(f"CF2 did not converge (mu={mu}, x={x})")
    h *= a1
    kmu = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = kmu * (mu + x + 0.5 - h) / x
    return kmu, k1


def _kve_scalar(nu: float, x: float) -> float:
    nu = abs(nu)
    nl = int(nu + 0.5)
    mu = nu - nl
    if x < _CROSSOVER:
        kmu, k1 = _k_pair_temme(mu, x)
        scale = math.exp(x)
        kmu *= scale
        k1 *= scale
    else:
        kmu, k1 = _k_pair_cf2_scaled(mu, x)
    two_over_x = 2.0 / x
    for i in range(1, nl + 1):
        kmu, k1 = k1, (mu + i) * two_over_x * k1 + kmu
    return kmu


def _check(nu, omega):
    nu = np.asarray(nu, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if not (np.all(np.isfinite(nu)) and np.all(np.isfinite(omega))):
        raise DomainError("Bessel K requires finite order and argument")
    if np.any(omega <= 0):
        raise DomainError("Bessel K requires a strictly positive argument")
    return nu, omega


_kve_vec = np.vectorize(_kve_scalar, otypes=[float])


def bessel_k_scaled(nu, omega):
    """Exponentially scaled modified Bessel function ``e^omega K_nu(omega)``.

    Accepts scalars or arrays (broadcast). Finite for omega up to well beyond
    1e6 at moderate order; returns a float for scalar input.
    """
    nu_arr, om_arr = _check(nu, omega)
    if nu_arr.ndim == 0 and om_arr.ndim == 0:
        return _kve_scalar(float(nu_arr), float(om_arr))
    return _kve_vec(nu_arr, om_arr)


def bessel_k(nu, omega):
    """Modified Bessel function of the third kind ``K_nu(omega)``, real order.

    Underflows gracefully to 0 for large omega; use :func:`bessel_k_scaled`
    wherever K is multiplied by ``e^omega``.
    """
    return bessel_k_scaled(nu, omega) * np.exp(-np.asarray(omega, dtype=float))


def bessel_k_asymptotic(nu: float, omega: float, terms: int) -> float:
    """Large-argument expansion of ``K_nu(omega)`` with ``terms`` correction terms.

    sqrt(pi/2) omega^(-1/2) e^(-omega) [1 + (mu-1)/(8 omega)
    + (mu-1)(mu-9)/(2! (8 omega)^2) + ...], mu = 4 nu^2. The series is
    asymptotic, not convergent: no accuracy is promised at small omega.
    """
    if terms < 1:
        raise DomainError("asymptotic expansion needs at least one correction term")
    _check(nu, omega)
    mu = 4.0 * nu * nu
    series = 1.0
    term = 1.0
    for m in range(1, terms + 1):
        term *= (mu - (2 * m - 1) ** 2) / (m * 8.0 * omega)
        series += term
    return math.sqrt(math.pi / (2.0 * omega)) * math.exp(-omega) * series


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"log_gamma requires a finite positive argument, got {x}")
    return math.lgamma(x)


def log_bessel_k_scaled(nu: float, omega: float) -> float:
    """log(e^omega K_nu(omega)) for omega > 0, finite even where K_nu overflows."""
    _check(nu, omega)
    val = float(bessel_k_scaled(nu, omega))
    if math.isfinite(val):
        return math.log(val)
    # overflow happens only at tiny omega, where K_nu(z) = Gamma(|nu|)/2 (2/z)^|nu|
    nu = abs(nu)
    return math.lgamma(nu) + (nu - 1.0) * math.log(2.0) - nu * math.log(omega) + omega


def power_bessel_term(x, H: float, ab: float):
    """``x^(2H+1/2) e^(ab x) K_{1/2-2H}(ab x)``, the building block of every
    covariance formula. Defined as 0 at x = 0 (its limit for H < 1).
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    if np.any(pos):
        xp = x[pos]
        nu = abs(0.5 - 2.0 * H)
        with np.errstate(over="ignore", invalid="ignore"):
            k = np.asarray(bessel_k_scaled(nu, ab * xp), dtype=float)
            val = xp ** (2.0 * H + 0.5) * k
        bad = ~np.isfinite(val)
        if np.any(bad):
            # K overflows only at tiny arguments, where K_nu(z) = Gamma(nu)/2 (2/z)^nu exactly
            z = ab * xp[bad]
            val[bad] = np.exp((2.0 * H + 0.5) * np.log(xp[bad]) + math.lgamma(nu)
                              + (nu - 1.0) * math.log(2.0) - nu * np.log(z))
        out[pos] = val
    return out if out.ndim else float(out)
