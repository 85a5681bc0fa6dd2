"""Seed handling.

Every random choice in this package flows through NumPy's PCG64 generator
(``numpy.random.default_rng``), so a fixed integer seed reproduces identical
streams across platforms.  ``derive_seed`` gives stable, independent child
seeds, e.g. one per optimizer restart.
"""

from __future__ import annotations

import numpy as np


def as_generator(seed) -> np.random.Generator:
    """Accept a Generator, an integer seed, or None (fresh OS entropy)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_seed(seed: int, index: int) -> int:
    """Deterministic child seed for stream `index` under a root `seed`."""
    a, b = np.random.SeedSequence([int(seed), int(index)]).generate_state(2, dtype=np.uint64)
    return (int(a) << 64) | int(b)
