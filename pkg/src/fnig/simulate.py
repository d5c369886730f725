"""Conditional-Gaussian path simulation of X(t) = B_H(G(t)).

Given a subordinator path, (X(t_1), ..., X(t_n)) is a centered Gaussian
vector whose covariance is the FBM kernel evaluated at (G(t_1), ..., G(t_n)).
We factor that Gram matrix by Cholesky (with a recorded jitter fallback for
near-singular matrices) and multiply by standard normals.
"""

from dataclasses import dataclass, field
import logging

import numpy as np
from scipy.linalg import lapack

from .errors import DomainError, FactorizationError
from .ig import SubordinatorPath, _ig_draw, subordinator_path, subordinator_values, with_origin
from .params import FnigParams, IgParams
from .streams import as_generator
from .tables import csv_text, json_text

log = logging.getLogger(__name__)

JITTER_START = 1e-12
JITTER_CAP = 1e-6
_TIE = 1e-14
_BLOCK = 512


@dataclass
class GramMatrix:
    entries: np.ndarray
    source: np.ndarray


@dataclass
class CholFactor:
    L: np.ndarray
    jitter_used: float = 0.0


def gram_matrix(points, H: float, sigma2: float = 1.0) -> GramMatrix:
    """FBM covariance (sigma^2/2)(g_i^2H + g_j^2H - |g_i - g_j|^2H) at ``points``.

    Built in row blocks so an n x n matrix needs no n x n temporaries.
    """
    g = np.asarray(points, dtype=float)
    if g.ndim != 1 or np.any(g <= 0):
        raise DomainError("Gram matrix points must be a 1-d array of positive times")
    h2 = 2.0 * H
    n = g.size
    gp = g**h2
    out = np.empty((n, n))
    for start in range(0, n, _BLOCK):
        rows = slice(start, min(start + _BLOCK, n))
        gi = g[rows, None]
        d = np.abs(gi - g[None, :])
        d[d < _TIE * np.maximum(gi, g[None, :])] = 0.0
        np.power(d, h2, out=d)
        out[rows] = gp[rows, None] + gp[None, :] - d
    out *= 0.5 * sigma2
    return GramMatrix(out, g)


def cholesky_psd(g: GramMatrix) -> CholFactor:
    """Lower Cholesky factor of ``g`` with escalating diagonal jitter.

    Tries the exact matrix first, then jitter 1e-12 * max(diag), growing by
    10x up to 1e-6 * max(diag). The jitter actually used is recorded.
    """
    a = np.asarray(g.entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("Gram matrix must be square")
    n = a.shape[0]
    if n == 0:
        return CholFactor(np.zeros((0, 0)))
    scale = float(np.max(np.diag(a)))
    if not scale > 0:
        raise FactorizationError("Gram matrix has no positive diagonal entry", pivot=0)
    levels = [0.0]
    jitter = JITTER_START
    while jitter <= JITTER_CAP * (1 + 1e-9):
        levels.append(jitter * scale)
        jitter *= 10.0
    info = 0
    for level in levels:
        work = np.array(a, order="F", copy=True)
        if level:
            work[np.diag_indices(n)] += level
        L, info = lapack.dpotrf(work, lower=1, clean=1, overwrite_a=1)
        if info == 0:
            if level:
                log.debug("Cholesky needed jitter %.3e", level)
            return CholFactor(np.ascontiguousarray(L), level)
        del work, L
    raise FactorizationError(
        f"Gram matrix is not positive definite even with jitter {levels[-1]:.3e}; "
        f"factorization failed at pivot index {info - 1}",
        pivot=info - 1,
    )


def gaussian_given_gram(f: CholFactor, z) -> np.ndarray:
    """X = L z. ``z`` may be a vector or an (n, k) matrix of standard normals."""
    z = np.asarray(z, dtype=float)
    if z.shape[0] != f.L.shape[1]:
        raise DomainError(f"dimension mismatch: factor is {f.L.shape}, z has leading size {z.shape[0]}")
    return f.L @ z


def uniform_grid(t_max: float, n_steps: int) -> np.ndarray:
    """t_k = k t_max / n_steps for k = 0..n_steps."""
    if not t_max > 0 or n_steps < 1:
        raise DomainError("uniform grid needs t_max > 0 and n_steps >= 1")
    return np.linspace(0.0, t_max, n_steps + 1)


@dataclass
class SamplePath:
    """X on ``times`` (starting at 0 with X(0) = 0) and the G path behind it."""

    times: np.ndarray
    values: np.ndarray
    subordinator: SubordinatorPath
    params: FnigParams
    seed: int | None = None
    jitter_used: float = 0.0
    index: tuple = field(default_factory=tuple)

    def metadata(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "stream_index": list(self.index),
            "jitter_used": self.jitter_used,
        }

    def to_csv(self) -> str:
        return csv_text({"t": self.times, "G": self.subordinator.values, "X": self.values}, self.metadata())

    def to_json(self) -> str:
        return json_text({"times": self.times, "G": self.subordinator.values, "X": self.values}, self.metadata())


def simulate_fnig_path(params: FnigParams, grid, rng, seed: int | None = None, index=()) -> SamplePath:
    """One FNIG path on ``grid`` (0 is prepended if missing).

    ``rng`` is a Generator or an integer seed; in the latter case it is also
    recorded as the path's seed.
    """
    params.require_drift()
    if not isinstance(rng, np.random.Generator):
        seed = int(rng)
    gen = as_generator(rng)
    times = with_origin(grid)
    sub = subordinator_path(times, params.alpha, params.beta, gen, seed=seed, index=index)
    factor = cholesky_psd(gram_matrix(sub.values[1:], params.H, params.sigma2))
    z = gen.standard_normal(times.size - 1)
    x = np.concatenate(([0.0], gaussian_given_gram(factor, z)))
    return SamplePath(times, x, sub, params, seed, factor.jitter_used, tuple(index))


def simulate_fnig_values(params: FnigParams, grid, rng: np.random.Generator, replicates: int) -> np.ndarray:
    """Many independent replicates of X on a short grid, shape (replicates, len(grid)).

    Vectorized over replicates with batched Cholesky; meant for grids of a
    handful of points (Monte Carlo of covariances), not long paths.
    """
    params.require_drift()
    grid = np.asarray(grid, dtype=float)
    gvals = subordinator_values(grid, params.alpha, params.beta, rng, replicates)
    zero_col = grid[0] == 0
    g = gvals[:, 1:] if zero_col else gvals
    h2 = 2.0 * params.H
    gi = g[:, :, None]
    gj = g[:, None, :]
    d = np.abs(gi - gj)
    d[d < _TIE * np.maximum(gi, gj)] = 0.0
    gram = 0.5 * params.sigma2 * (gi**h2 + gj**h2 - d**h2)
    z = rng.standard_normal(g.shape)
    try:
        L = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        L = np.stack([cholesky_psd(GramMatrix(m, gg)).L for m, gg in zip(gram, g)])
    x = np.einsum("rij,rj->ri", L, z)
    if zero_col:
        x = np.hstack([np.zeros((replicates, 1)), x])
    return x


def sample_marginal(t: float, params: FnigParams, rng, size=None):
    """Exact draws of X(t) = sigma G(t)^H Z with G(t) ~ IG(alpha t, beta) independent of Z."""
    if not t > 0:
        raise DomainError("marginal sampling needs t > 0")
    params.require_drift()
    gen = as_generator(rng)
    ig = IgParams(params.alpha * t, params.beta)
    g = np.asarray(_ig_draw(np.float64(ig.a), ig.b, gen, size))
    z = gen.standard_normal(g.shape)
    out = params.sigma * g**params.H * z
    return out if out.ndim else float(out)
