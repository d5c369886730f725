"""Exception types shared across the package."""

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class FactorizationError(np.linalg.LinAlgError):
    """Cholesky factorization failed even at the maximum allowed jitter."""

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""
