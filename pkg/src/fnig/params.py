"""Validated parameter containers."""

from dataclasses import asdict, dataclass
import math

from .errors import DomainError


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class IgParams:
    """Inverse Gaussian IG(a, b): barrier ``a`` (alpha * t) and drift ``b`` (beta).

    ``b = 0`` is accepted here (one-sided stable law); moment and sampling
    routines reject it themselves.
    """

    a: float
    b: float

    def __post_init__(self):
        if not _finite("a", self.a) > 0:
            raise DomainError(f"IG barrier a must be > 0, got {self.a}")
        if not _finite("b", self.b) >= 0:
            raise DomainError(f"IG drift b must be >= 0, got {self.b}")


@dataclass(frozen=True)
class FbmParams:
    H: float
    sigma2: float = 1.0

    def __post_init__(self):
        if not 0 < _finite("H", self.H) < 1:
            raise DomainError(f"Hurst parameter must lie in (0, 1), got {self.H}")
        if not _finite("sigma2", self.sigma2) > 0:
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2}")


@dataclass(frozen=True)
class NFbmParams:
    """n-th order FBM: order ``n`` >= 1, ``H`` in (n-1, n), noise step ``l``."""

    n: int
    H: float
    l: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"order n must be an integer >= 1, got {self.n}")
        if not self.n - 1 < _finite("H", self.H) < self.n:
            raise DomainError(f"H must lie in ({self.n - 1}, {self.n}) for order n={self.n}, got {self.H}")
        if not _finite("l", self.l) > 0:
            raise DomainError(f"increment step l must be > 0, got {self.l}")


@dataclass(frozen=True)
class FnigParams:
    """theta = (alpha, beta, sigma2, H) of the FNIG process B_H(G(t)).

    beta = 0 is only allowed together with H = 1/2 (the Cauchy case).
    """

    alpha: float
    beta: float
    sigma2: float
    H: float

    def __post_init__(self):
        if not _finite("alpha", self.alpha) > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not _finite("beta", self.beta) >= 0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")
        if not _finite("sigma2", self.sigma2) > 0:
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2}")
        if not 0 < _finite("H", self.H) < 1:
            raise DomainError(f"Hurst parameter must lie in (0, 1), got {self.H}")
        if self.beta == 0 and self.H != 0.5:
            raise DomainError("beta = 0 requires H = 1/2")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def ab(self) -> float:
        return self.alpha * self.beta

    def require_drift(self):
        if self.beta <= 0:
            raise DomainError("moments require beta > 0")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class NoiseParams:
    """Lag ``eta`` of the increment process X(t + eta) - X(t)."""

    eta: float
    base: FnigParams

    def __post_init__(self):
        if not _finite("eta", self.eta) > 0:
            raise DomainError(f"eta must be > 0, got {self.eta}")


@dataclass(frozen=True)
class NFnigParams:
    """n-th order FNIG: B^n_H(G(t)) with H in (n-1, n); the role of sigma^2 is
    played by the n-FBM constant C_H^n."""

    n: int
    alpha: float
    beta: float
    H: float
    eta: float = 1.0

    def __post_init__(self):
        NFbmParams(self.n, self.H, self.eta)
        if not _finite("alpha", self.alpha) > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")
        if not _finite("beta", self.beta) > 0:
            raise DomainError(f"beta must be > 0 for n-th order analytics, got {self.beta}")

    @property
    def ab(self) -> float:
        return self.alpha * self.beta

    @property
    def kernel(self) -> NFbmParams:
        return NFbmParams(self.n, self.H, self.eta)
