from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike

from sincsmooth.core.rng import stream
from sincsmooth.core.types import MarkovSeries
from sincsmooth.errors import DomainError


def _check_length(T: int) -> None:  # noqa: N803
    if T < 2:
        raise DomainError(f"series length must be at least 2, got {T}")


def simulate_ar1(
    T: int, rho: float, x0: float = 0.5, seed: int = 0, *, stream_index: int = 0  # noqa: N803
) -> MarkovSeries:
    """X_{t+1} = rho X_t + sqrt(1 - rho^2) Z_t started at x0."""
    _check_length(T)
    if not abs(rho) < 1.0:
        raise DomainError(f"AR(1) coefficient must lie in (-1, 1), got {rho}")
    shocks = stream(seed, stream_index).standard_normal(T - 1)
    scale = math.sqrt(1.0 - rho * rho)
    values = np.empty(T)
    values[0] = x0
    for t in range(T - 1):
        values[t + 1] = rho * values[t] + scale * shocks[t]
    return MarkovSeries(values.reshape(-1, 1))


def simulate_coupled_ar(
    T: int,  # noqa: N803
    rho: float = 0.6,
    rho1: float = 0.3,
    rho2: float = 0.7,
    x0: ArrayLike = (0.5, 0.2),
    seed: int = 0,
    *,
    stream_index: int = 0,
) -> MarkovSeries:
    """Two-dimensional chain whose second coordinate is driven by both previous coordinates.

    X1' = rho X1 + sqrt(1 - rho^2) Z
    X2' = rho1 X1 + rho2 X2 + sqrt(1 - rho1^2 - rho2^2) Z'
    """
    _check_length(T)
    if not abs(rho) < 1.0:
        raise DomainError(f"rho must lie in (-1, 1), got {rho}")
    residual = 1.0 - rho1 * rho1 - rho2 * rho2
    if not residual > 0.0:
        raise DomainError(f"rho1^2 + rho2^2 must be below 1, got {1.0 - residual:.4g}")
    start = np.asarray(x0, dtype=np.float64)
    if start.shape != (2,):
        raise DomainError("coupled process starts from a point in R^2")
    shocks = stream(seed, stream_index).standard_normal((T - 1, 2))
    first_scale = math.sqrt(1.0 - rho * rho)
    second_scale = math.sqrt(residual)
    values = np.empty((T, 2))
    values[0] = start
    for t in range(T - 1):
        x1, x2 = values[t]
        values[t + 1, 0] = rho * x1 + first_scale * shocks[t, 0]
        values[t + 1, 1] = rho1 * x1 + rho2 * x2 + second_scale * shocks[t, 1]
    return MarkovSeries(values)
