from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from sincsmooth.errors import DomainError


def mise(est_values: ArrayLike, truth_values: ArrayLike, grid_weights: ArrayLike) -> float:
    """Quadrature sum of w (estimate - truth)^2; one replicate's integrated squared error."""
    estimate = np.asarray(est_values, dtype=np.float64).reshape(-1)
    truth = np.asarray(truth_values, dtype=np.float64).reshape(-1)
    weights = np.asarray(grid_weights, dtype=np.float64).reshape(-1)
    if not estimate.shape == truth.shape == weights.shape:
        raise DomainError(
            f"length mismatch: {estimate.shape[0]} estimates, {truth.shape[0]} truths, "
            f"{weights.shape[0]} weights"
        )
    return float(np.sum(weights * (estimate - truth) ** 2))
