from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.kernel import kernel_factors, product_terms
from sincsmooth.core.numerics import canonical_sum, canonical_sum_rows, parallel_map
from sincsmooth.core.types import (
    DerivativeTensor,
    EstimatorConfig,
    SampleMatrix,
    as_point,
    as_points,
)
from sincsmooth.errors import DomainError


@dataclass(frozen=True, slots=True)
class DensityEvaluation:
    point: tuple[float, ...]
    raw_value: float
    clipped_value: float
    variance_estimate: float


def kernel_terms(data: NDArray[np.float64], x: NDArray[np.float64], R: float) -> NDArray[np.float64]:  # noqa: N803
    """prod_j K_R(x_j - X_ij) for every row i of `data`."""
    return product_terms(kernel_factors(x - data, R, 0), 0)


def normalizer(n: int, d: int) -> float:
    return n * math.pi**d


def plugin_variance(raw_value: float, n: int, R: float, d: int) -> float:  # noqa: N803
    """R^d max(f, 0) / (n pi^d), the large-R variance of the estimator at a point."""
    return R**d * max(raw_value, 0.0) / normalizer(n, d)


def term_standard_error(terms: NDArray[np.float64], scale: float) -> float:
    """Standard error of sum(terms) / scale from the spread of the terms; 0 for one term."""
    n = terms.shape[0]
    if n < 2:
        return 0.0
    return math.sqrt(n * float(np.var(terms, ddof=1))) / scale


def _raw_density(sample: SampleMatrix, x: NDArray[np.float64], R: float) -> float:  # noqa: N803
    return canonical_sum(kernel_terms(sample.data, x, R)) / normalizer(sample.n, sample.d)


def density_at(sample: SampleMatrix, x: ArrayLike, cfg: EstimatorConfig) -> DensityEvaluation:
    cfg.check_dimension(sample.d)
    point = as_point(x, sample.d)
    raw = _raw_density(sample, point, cfg.R)
    return DensityEvaluation(
        point=tuple(float(v) for v in point),
        raw_value=raw,
        clipped_value=cfg.clip_mode.apply(raw),
        variance_estimate=plugin_variance(raw, sample.n, cfg.R, sample.d),
    )


def density_grid(
    sample: SampleMatrix, grid: ArrayLike, cfg: EstimatorConfig
) -> list[DensityEvaluation]:
    points = as_points(grid, sample.d)
    started_at = time.monotonic()
    evaluations = parallel_map(lambda x: density_at(sample, x, cfg), list(points), cfg.threads)
    logger.debug(
        "Density on {} points (n={}, d={}, R={:.4g}) in {:.3f}s",
        len(points),
        sample.n,
        sample.d,
        cfg.R,
        time.monotonic() - started_at,
    )
    return evaluations


def density_values(sample: SampleMatrix, grid: ArrayLike, cfg: EstimatorConfig) -> NDArray[np.float64]:
    return np.array([evaluation.raw_value for evaluation in density_grid(sample, grid, cfg)])


def density_partials(
    sample: SampleMatrix, x: ArrayLike, cfg: EstimatorConfig
) -> tuple[float, NDArray[np.float64], NDArray[np.float64]]:
    """Value, gradient and Hessian of the raw estimator at `x`."""
    cfg.check_dimension(sample.d)
    point = as_point(x, sample.d)
    factors = kernel_factors(point - sample.data, cfg.R, 2)
    scale = normalizer(sample.n, sample.d)
    value = canonical_sum(product_terms(factors, 0)) / scale
    grad = canonical_sum_rows(product_terms(factors, 1).T) / scale
    hess = canonical_sum_rows(np.moveaxis(product_terms(factors, 2), 0, -1)) / scale
    return value, grad, hess


def density_derivative_at(
    sample: SampleMatrix, x: ArrayLike, order: int, cfg: EstimatorConfig
) -> DerivativeTensor:
    if order not in (1, 2):
        raise DomainError(f"density derivative order must be 1 or 2, got {order}")
    cfg.check_dimension(sample.d)
    point = as_point(x, sample.d)
    factors = kernel_factors(point - sample.data, cfg.R, order)
    terms = product_terms(factors, order)
    entries = canonical_sum_rows(np.moveaxis(terms, 0, -1)) / normalizer(sample.n, sample.d)
    return DerivativeTensor(order=order, entries=entries)
