"""Inverse Gaussian law IG(a, b) and the IG subordinator.

Density  f(x; a, b) = (2 pi)^(-1/2) a x^(-3/2) exp(ab - (a^2/x + b^2 x)/2),
mean a/b, variance a/b^3. The subordinator G has independent increments
G(t + s) - G(s) ~ IG(alpha t, beta).
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .params import IgParams
from .special import log_bessel_k_scaled
from .tables import csv_text, json_text


def ig_density(x, p: IgParams):
    """IG(a, b) density at ``x > 0`` (b = 0 gives the one-sided stable-1/2 law)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or not np.all(np.isfinite(x)):
        raise DomainError("IG density is defined for finite x > 0")
    a, b = p.a, p.b
    logf = (
        math.log(a) - 0.5 * math.log(2 * math.pi) - 1.5 * np.log(x)
        + a * b - 0.5 * (a * a / x + b * b * x)
    )
    out = np.exp(logf)
    return out if out.ndim else float(out)


def ig_moment(r: float, p: IgParams) -> float:
    """E[Y^r] for Y ~ IG(a, b), any real r:
    (a/b)^r K_{r-1/2}(ab) / K_{-1/2}(ab), via scaled Bessel functions.
    """
    if p.b <= 0:
        raise DomainError("moments require beta > 0")
    r = float(r)
    if r == 0:
        return 1.0
    ab = p.a * p.b
    # e^{ab} K_{-1/2}(ab) = sqrt(pi / (2 ab))
    log_ratio = log_bessel_k_scaled(r - 0.5, ab) - 0.5 * math.log(math.pi / (2.0 * ab))
    return math.exp(r * math.log(p.a / p.b) + log_ratio)


def laplace_exponent(x, alpha: float, beta: float):
    """Phi(x) = alpha (sqrt(beta^2 + 2x) - beta), so that E exp(-x G(t)) = exp(-t Phi(x))."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("Laplace exponent is defined for x >= 0")
    if alpha <= 0 or beta < 0:
        raise DomainError("need alpha > 0 and beta >= 0")
    # alpha * 2x / (sqrt(beta^2 + 2x) + beta) avoids cancellation for small x
    out = alpha * 2.0 * x / (np.sqrt(beta * beta + 2.0 * x) + beta) if beta > 0 else alpha * np.sqrt(2.0 * x)
    return out if out.ndim else float(out)


def _msh(a, b, rng: np.random.Generator, shape):
    """Michael-Schucany-Haas transformation with rejection, vectorized."""
    mean = a / b
    nu = rng.standard_normal(shape)
    y = nu * nu
    # larger root of the quadratic; the smaller one is mean^2 / larger,
    # which avoids the cancellation in the textbook form for large y
    x_big = mean + y / (2 * b * b) + np.sqrt(4 * a * b * y + y * y) / (2 * b * b)
    x_small = mean * mean / x_big
    u = rng.random(shape)
    return np.where(u <= mean / (mean + x_small), x_small, x_big)


def ig_sample(p: IgParams, rng: np.random.Generator, size=None):
    """Exact IG(a, b) variates. Exact zeros (underflow) are redrawn."""
    if p.b <= 0:
        raise DomainError("sampling requires beta > 0")
    return _ig_draw(np.float64(p.a), p.b, rng, size)


def _ig_draw(a, b, rng, size=None):
    shape = np.broadcast_shapes(np.shape(a), () if size is None else np.atleast_1d(size).tolist())
    a = np.broadcast_to(np.asarray(a, dtype=float), shape)
    out = np.asarray(_msh(a, b, rng, shape), dtype=float)
    bad = out <= 0
    while np.any(bad):
        out[bad] = _msh(a[bad], b, rng, (int(bad.sum()),))
        bad = out <= 0
    return out if out.ndim else float(out)


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("time grid must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(grid)) or grid[0] < 0:
        raise DomainError("time grid must be finite and start at t >= 0")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("time grid must be strictly increasing")
    return grid


def with_origin(grid) -> np.ndarray:
    grid = _check_grid(grid)
    return grid if grid[0] == 0 else np.concatenate(([0.0], grid))


@dataclass
class SubordinatorPath:
    """One realization of G on a grid; ``times[0] == 0`` and ``values[0] == 0``."""

    times: np.ndarray
    values: np.ndarray
    alpha: float
    beta: float
    seed: int | None = None
    index: tuple = field(default_factory=tuple)

    def metadata(self) -> dict:
        return {"params": {"alpha": self.alpha, "beta": self.beta}, "seed": self.seed,
                "stream_index": list(self.index)}

    def to_csv(self) -> str:
        return csv_text({"t": self.times, "G": self.values}, self.metadata())

    def to_json(self) -> str:
        return json_text({"times": self.times, "values": self.values}, self.metadata())


def subordinator_increments(grid, alpha: float, beta: float, rng, replicates=None) -> np.ndarray:
    """IG increments over consecutive cells of ``with_origin(grid)``.

    Shape ``(len - 1,)`` or ``(replicates, len - 1)``.
    """
    times = with_origin(grid)
    if alpha <= 0 or beta <= 0:
        raise DomainError("subordinator simulation needs alpha > 0 and beta > 0")
    dt = np.diff(times)
    a = alpha * dt if replicates is None else np.broadcast_to(alpha * dt, (replicates, dt.size))
    return np.asarray(_ig_draw(a, beta, rng))


def subordinator_path(grid, alpha: float, beta: float, rng, seed=None, index=()) -> SubordinatorPath:
    """Simulate G on ``grid`` by summing independent IG(alpha dt, beta) increments."""
    times = with_origin(grid)
    inc = subordinator_increments(times, alpha, beta, rng)
    values = np.concatenate(([0.0], np.cumsum(inc)))
    return SubordinatorPath(times, values, float(alpha), float(beta), seed, tuple(index))


def subordinator_values(grid, alpha: float, beta: float, rng, replicates: int) -> np.ndarray:
    """``replicates`` independent paths of G evaluated at ``grid``, shape (replicates, len(grid))."""
    grid = _check_grid(grid)
    values = np.cumsum(subordinator_increments(grid, alpha, beta, rng, replicates), axis=1)
    if grid[0] == 0:
        values = np.hstack([np.zeros((replicates, 1)), values])
    return values


def _log_ig_density_u(u, a, b):
    # density of U = log Y for Y ~ IG(a, b)
    return math.log(a) - 0.5 * math.log(2 * math.pi) + a * b - 0.5 * u - 0.5 * (a * a * np.exp(-u) + b * b * np.exp(u))


def ig_expectation_rule(p: IgParams, n_nodes: int = 801, min_power: float = 0.0, max_power: float = 0.0,
                        drop: float = 46.0):
    """Nodes and weights with sum(w * f(y)) ~= E f(Y), Y ~ IG(a, b).

    Trapezoidal rule in u = log y on a window where the integrand
    y^power * density is within ``e^-drop`` of its peak, for powers in
    [min_power, max_power]. The log-transformed integrand is analytic in a
    strip and decays doubly exponentially, so the rule converges
    geometrically in the node count.
    """
    if p.b <= 0:
        raise DomainError("expectation rule requires beta > 0")
    a, b = p.a, p.b

    def edge(power, side):
        f = lambda u: float(_log_ig_density_u(u, a, b)) + power * u  # noqa: E731
        # mode of the concave function: b^2 e^{2u} + (1 - 2 power) e^u - a^2 = 0
        c1 = 1.0 - 2.0 * power
        root = (2 * a * a / (c1 + math.sqrt(c1 * c1 + 4 * a * a * b * b)) if c1 > 0
                else (-c1 + math.sqrt(c1 * c1 + 4 * a * a * b * b)) / (2 * b * b))
        u0 = math.log(root)
        top = f(u0)
        step = 1.0
        u1 = u0 + side * step
        while f(u1) > top - drop:
            step *= 2.0
            u1 = u0 + side * step
        return brentq(lambda u: f(u) - (top - drop), min(u0, u1), max(u0, u1), xtol=1e-12)

    lo = min(edge(min(min_power, 0.0), -1), edge(max_power, -1))
    hi = max(edge(max(max_power, 0.0), +1), edge(min_power, +1))
    u = np.linspace(lo, hi, n_nodes)
    h = u[1] - u[0]
    w = h * np.exp(_log_ig_density_u(u, a, b))
    return np.exp(u), w
