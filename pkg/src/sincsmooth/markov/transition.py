"""Fourier transition estimator for Markov sequences.

p(y | x) = sum_{i<T} prod_j K_R(x_j - X_ij) K_R(y_j - X_{i+1,j})
           / (pi^d sum_{i<=T} prod_j K_R(x_j - X_ij))
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.numerics import canonical_sum, guarded_ratio, parallel_map
from sincsmooth.core.types import EstimatorConfig, MarkovSeries, as_point, as_points
from sincsmooth.density.estimator import kernel_terms


@dataclass(frozen=True, slots=True)
class TransitionEvaluation:
    x: tuple[float, ...]
    y: tuple[float, ...]
    value: float
    numerator_mass: float
    denominator_mass: float
    clipped: float
    reliable: bool


@dataclass(frozen=True, slots=True, eq=False)
class _Conditioning:
    x: NDArray[np.float64]
    leading: NDArray[np.float64]
    denominator: float


def _condition(series: MarkovSeries, x: ArrayLike, cfg: EstimatorConfig) -> _Conditioning:
    cfg.check_dimension(series.d)
    point = as_point(x, series.d)
    weights = kernel_terms(series.data, point, cfg.R)
    return _Conditioning(x=point, leading=weights[:-1], denominator=canonical_sum(weights))


def _evaluate(
    series: MarkovSeries, given: _Conditioning, y: NDArray[np.float64], cfg: EstimatorConfig
) -> TransitionEvaluation:
    R = cfg.R
    d = series.d
    numerator = canonical_sum(given.leading * kernel_terms(series.data[1:], y, R))
    scale = series.T * math.pi**d
    floor = cfg.denominator_floor_scale * R**d / series.T
    value, reliable = guarded_ratio(numerator / (scale * math.pi**d), given.denominator / scale, floor)
    return TransitionEvaluation(
        x=tuple(float(v) for v in given.x),
        y=tuple(float(v) for v in y),
        value=value,
        numerator_mass=numerator,
        denominator_mass=given.denominator,
        clipped=cfg.clip_mode.apply(value),
        reliable=reliable,
    )


def transition_at(
    series: MarkovSeries, x: ArrayLike, y: ArrayLike, cfg: EstimatorConfig
) -> TransitionEvaluation:
    given = _condition(series, x, cfg)
    return _evaluate(series, given, as_point(y, series.d), cfg)


def transition_grid(
    series: MarkovSeries, x: ArrayLike, y_grid: ArrayLike, cfg: EstimatorConfig
) -> list[TransitionEvaluation]:
    """Transition density at every y of the grid, conditioning sums computed once."""
    started_at = time.monotonic()
    given = _condition(series, x, cfg)
    points = as_points(y_grid, series.d)
    evaluations = parallel_map(lambda y: _evaluate(series, given, y, cfg), list(points), cfg.threads)
    if evaluations and not evaluations[0].reliable:
        logger.warning("Marginal estimate at x={} is below the floor", tuple(given.x))
    logger.debug(
        "Transition density on {} points (T={}, d={}) in {:.3f}s",
        len(points),
        series.T,
        series.d,
        time.monotonic() - started_at,
    )
    return evaluations
