import math

import numpy as np
import pytest
from scipy.integrate import quad

ACCEPTANCE_LINES = []


def bessel_k_quadrature(nu: float, omega: float) -> float:
    """K_nu(omega) = int_0^inf cosh(nu u) exp(-omega cosh u) du by adaptive quadrature.

    The integrand is factored as e^-omega * [cosh(nu u) e^{-omega (cosh u - 1)}]
    and truncated where the bracket has fallen below e^-1000.
    """
    upper = math.acosh(1.0 + 1000.0 / omega)
    val, _ = quad(lambda u: math.cosh(nu * u) * math.exp(-omega * (math.cosh(u) - 1.0)),
                  0.0, upper, epsabs=0.0, epsrel=1e-13, limit=500)
    return val * math.exp(-omega)


def ig_raw_moments(a: float, b: float):
    """First three raw moments of IG(a, b): mean m = a/b, shape l = a^2,
    E Y^2 = m^2 + m^3/l, E Y^3 = m^3 + 3 m^4/l + 3 m^5/l^2."""
    m, lam = a / b, a * a
    return m, m * m + m**3 / lam, m**3 + 3 * m**4 / lam + 3 * m**5 / lam**2


def within_sigmas(estimate, se, target, k=3.0) -> bool:
    return abs(estimate - target) <= k * se


def mean_se(x):
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


@pytest.fixture
def acceptance():
    """Record a pass/fail line for an acceptance criterion and print it."""
    def record(criterion: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
