from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.kernel import kernel_factors
from sincsmooth.core.numerics import canonical_sum, guarded_ratio, parallel_map, two_sided_z
from sincsmooth.core.rng import subsample_indices
from sincsmooth.core.types import (
    EstimatorConfig,
    IntervalEstimate,
    LabeledSample,
    as_point,
    as_points,
    check_tau,
)
from sincsmooth.density.estimator import kernel_terms, normalizer, term_standard_error
from sincsmooth.errors import DegenerateSmootherError, DomainError, InfiniteWidthError

_PAIR_BLOCK = 2_000_000


@dataclass(frozen=True, slots=True)
class RegressionEvaluation:
    point: tuple[float, ...]
    m_hat: float
    denominator: float
    reliable: bool
    standard_error: float = 0.0


@dataclass(frozen=True, slots=True)
class SmoothingMatrixSummary:
    trace_L: float  # noqa: N815
    trace_LtL: float  # noqa: N815
    n: int
    rss: float

    @property
    def dof_denominator(self) -> float:
        return self.n - 2.0 * self.trace_L + self.trace_LtL


def denominator_floor(cfg: EstimatorConfig, n: int, d: int) -> float:
    return cfg.denominator_floor_scale * cfg.R**d / n


def regress_at(data: LabeledSample, x: ArrayLike, cfg: EstimatorConfig) -> RegressionEvaluation:
    """Sinc-kernel Nadaraya-Watson estimate sum Y_i w_i / sum w_i.

    The weighted sum is taken around the median response, which makes constant
    responses reproduce exactly. Below the numeric denominator floor the numerator
    density is divided by the signed floor instead. A point is reliable only when the
    density estimate also clears `reliability_z` standard errors of itself; elsewhere
    the ratio is dominated by sampling noise in the denominator.
    """
    cfg.check_dimension(data.d)
    point = as_point(x, data.d)
    weights = kernel_terms(data.x.data, point, cfg.R)
    scale = normalizer(data.n, data.d)
    weight_sum = canonical_sum(weights)
    density = weight_sum / scale
    floor = denominator_floor(cfg, data.n, data.d)
    spread = term_standard_error(weights, scale)

    if abs(density) > floor:
        center = float(np.median(data.y))
        m_hat = center + canonical_sum((data.y - center) * weights) / weight_sum
        reliable = abs(density) > cfg.reliability_z * spread
    else:
        m_hat, reliable = guarded_ratio(canonical_sum(data.y * weights) / scale, density, floor)
    if not reliable:
        logger.debug(
            "Unreliable regression denominator {:.3g} (se {:.3g}) at {}",
            density,
            spread,
            tuple(point),
        )

    return RegressionEvaluation(
        point=tuple(float(v) for v in point),
        m_hat=m_hat,
        denominator=density,
        reliable=reliable,
        standard_error=spread,
    )


def smoother_weights(
    data: LabeledSample, x: ArrayLike, cfg: EstimatorConfig
) -> NDArray[np.float64]:
    """Row of the smoother at `x`: w_i(x) / sum_k w_k(x), so m_hat(x) = weights @ Y."""
    cfg.check_dimension(data.d)
    point = as_point(x, data.d)
    weights = kernel_terms(data.x.data, point, cfg.R)
    weight_sum = canonical_sum(weights)
    if abs(weight_sum) <= denominator_floor(cfg, data.n, data.d) * normalizer(data.n, data.d):
        raise DegenerateSmootherError(f"smoother weights at {tuple(point)} have a vanishing sum")
    return weights / weight_sum


def regress_curve(
    data: LabeledSample, curve: ArrayLike, cfg: EstimatorConfig
) -> list[RegressionEvaluation]:
    points = as_points(curve, data.d)
    evaluations = parallel_map(lambda x: regress_at(data, x, cfg), list(points), cfg.threads)
    unreliable = sum(1 for evaluation in evaluations if not evaluation.reliable)
    if unreliable:
        logger.warning("{} of {} curve points have unreliable denominators", unreliable, len(points))
    return evaluations


def smoothing_summary(
    data: LabeledSample, cfg: EstimatorConfig, cap: int | None = None
) -> SmoothingMatrixSummary:
    """Traces of the smoother matrix L_ij = w_j(X_i) / sum_k w_k(X_i) and the residual sum.

    Rows beyond `cap` are dropped by a seeded subsample before the O(n^2 d) pass.
    """
    limit = cfg.sigma2_cap if cap is None else cap
    rows = subsample_indices(data.n, limit, cfg.seed)
    x = data.x.data[rows]
    y = data.y[rows]
    n, d = x.shape
    if n < 2:
        raise DomainError("smoother traces need at least 2 rows")
    R = cfg.R
    diagonal = R**d
    center = float(np.median(y))
    min_row_sum = denominator_floor(cfg, n, d) * normalizer(n, d)

    trace_l = 0.0
    trace_ltl = 0.0
    rss = 0.0
    block = max(1, _PAIR_BLOCK // (n * d))
    for start in range(0, n, block):
        stop = min(start + block, n)
        diffs = x[start:stop, None, :] - x[None, :, :]
        weights = np.prod(kernel_factors(diffs, R, 0)[0], axis=2)
        row_sums = weights.sum(axis=1)
        weak = np.flatnonzero(np.abs(row_sums) <= min_row_sum)
        if weak.size:
            raise DegenerateSmootherError(
                f"smoother row {int(rows[start + weak[0]])} has a vanishing weight sum"
            )
        fitted = center + ((y[None, :] - center) * weights).sum(axis=1) / row_sums
        rss += float(np.sum((y[start:stop] - fitted) ** 2))
        trace_l += float(np.sum(diagonal / row_sums))
        trace_ltl += float(np.sum((weights / row_sums[:, None]) ** 2))

    return SmoothingMatrixSummary(trace_L=trace_l, trace_LtL=trace_ltl, n=n, rss=rss)


def sigma2_hat(data: LabeledSample, cfg: EstimatorConfig, cap: int | None = None) -> float:
    """Residual variance sum (Y - m(X))^2 / (n - 2 tr L + tr L'L)."""
    started_at = time.monotonic()
    limit = cfg.sigma2_cap if cap is None else cap
    if min(data.n, limit) < 3:
        raise DomainError("noise variance needs at least 3 rows")
    summary = smoothing_summary(data, cfg, limit)
    denominator = summary.dof_denominator
    if not denominator > 0.0:
        raise DegenerateSmootherError(
            f"n - 2 tr L + tr L'L = {denominator:.4g} is not positive; lower R"
        )
    sigma2 = summary.rss / denominator
    logger.info(
        "sigma2_hat={:.5g} (n={}, tr L={:.2f}, tr L'L={:.2f}) in {:.2f}s",
        sigma2,
        summary.n,
        summary.trace_L,
        summary.trace_LtL,
        time.monotonic() - started_at,
    )
    return sigma2


def regression_half_width(
    sigma2: float, n: int, R: float, d: int, density: float, z: float  # noqa: N803
) -> float:
    if density == 0.0:
        raise InfiniteWidthError("density estimate is zero; the interval has infinite width")
    return z * math.sqrt(sigma2 * R**d / (n * math.pi**d * abs(density)))


def regress_ci(
    data: LabeledSample,
    x: ArrayLike,
    cfg: EstimatorConfig,
    tau: float,
    *,
    sigma2: float | None = None,
) -> IntervalEstimate:
    """m(x) +- z sqrt(sigma2 R^d / (n pi^d |f(x)|)).

    Valid under the smoothness conditions on m p0 that the data cannot confirm.
    """
    level = check_tau(tau)
    evaluation = regress_at(data, x, cfg)
    if not evaluation.reliable:
        raise InfiniteWidthError(
            f"density estimate {evaluation.denominator:.3g} at {evaluation.point} is not"
            f" distinguishable from zero (se {evaluation.standard_error:.3g})"
        )
    variance = sigma2_hat(data, cfg) if sigma2 is None else sigma2
    half = regression_half_width(
        variance, data.n, cfg.R, data.d, evaluation.denominator, two_sided_z(level)
    )
    return IntervalEstimate(
        point=evaluation.point,
        estimate=evaluation.m_hat,
        lower=evaluation.m_hat - half,
        upper=evaluation.m_hat + half,
        level=1.0 - level,
        degenerate=half == 0.0,
    )
