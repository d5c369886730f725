"""Reproducible random streams.

Every replicate draws from its own counter-based Philox stream keyed by
``(seed, *index)``, so results do not depend on execution order or on how
replicates are spread over workers.
"""

import numpy as np


def substream(seed: int, *index: int) -> np.random.Generator:
    """Independent generator for ``(seed, index...)``."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    key = [int(seed), *(int(i) for i in index)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("an explicit random stream or seed is required")
    return substream(int(rng))
