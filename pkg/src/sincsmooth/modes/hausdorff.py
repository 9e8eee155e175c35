from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial.distance import cdist

from sincsmooth.errors import DomainError


def _point_set(points: ArrayLike, name: str) -> NDArray[np.float64]:
    array = np.asarray(points, dtype=np.float64)
    if array.ndim <= 1:
        array = array.reshape(-1, 1)
    if array.shape[0] == 0:
        raise DomainError(f"point set {name} is empty")
    if not np.all(np.isfinite(array)):
        raise DomainError(f"point set {name} has non-finite entries")
    return array


def hausdorff(a: ArrayLike, b: ArrayLike) -> float:
    """max(sup_a min_b |a - b|, sup_b min_a |a - b|) over two finite point sets."""
    left = _point_set(a, "a")
    right = _point_set(b, "b")
    if left.shape[1] != right.shape[1]:
        raise DomainError(f"dimension mismatch: {left.shape[1]} vs {right.shape[1]}")
    distances = cdist(left, right)
    return float(max(distances.min(axis=1).max(), distances.min(axis=0).max()))


def sup_hausdorff(estimated: Sequence[ArrayLike], truth: Sequence[ArrayLike]) -> float:
    """Largest per-point Hausdorff distance along two equally long sequences of sets."""
    if len(estimated) != len(truth):
        raise DomainError(f"{len(estimated)} estimated sets against {len(truth)} true sets")
    if not estimated:
        raise DomainError("no sets to compare")
    return max(hausdorff(a, b) for a, b in zip(estimated, truth, strict=True))
