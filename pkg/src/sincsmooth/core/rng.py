from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent, reproducible generator number `index` under a root `seed`.

    Philox is keyed by the seed; the stream index occupies the top counter word,
    so streams never overlap and any stream can be rebuilt on its own.
    """
    counter = np.array([0, 0, 0, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=seed & _MASK64, counter=counter))


def subsample_indices(n: int, cap: int, seed: int) -> np.ndarray:
    """Sorted indices of a seeded subsample of size `cap`, or all rows when n <= cap."""
    if n <= cap:
        return np.arange(n)
    return np.sort(stream(seed).choice(n, size=cap, replace=False))
