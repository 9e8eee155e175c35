from __future__ import annotations

import math
from typing import Literal

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from sincsmooth.core.numerics import canonical_sum, two_sided_z
from sincsmooth.core.types import (
    EstimatorConfig,
    IntervalEstimate,
    SampleMatrix,
    as_point,
    check_tau,
)
from sincsmooth.density.estimator import kernel_terms, plugin_variance
from sincsmooth.errors import DomainError

VarianceKind = Literal["plugin", "empirical"]


def plugin_half_width(estimate: float, n: int, R: float, d: int, z: float) -> float:  # noqa: N803
    return z * math.sqrt(plugin_variance(estimate, n, R, d))


def pointwise_ci(
    sample: SampleMatrix,
    x: ArrayLike,
    cfg: EstimatorConfig,
    tau: float,
    *,
    variance: VarianceKind = "empirical",
) -> IntervalEstimate:
    """Normal-approximation interval for p0(x).

    "empirical" uses the sample variance of the n kernel terms, which is the
    finite-R variance of the estimator. "plugin" uses the large-R limit
    R^d max(f, 0) / (n pi^d); at rule-of-thumb radii it overstates the variance
    (about 2.5 times for a standard normal at the origin) and over-covers.
    """
    level = check_tau(tau)
    cfg.check_dimension(sample.d)
    point = as_point(x, sample.d)
    terms = kernel_terms(sample.data, point, cfg.R) / math.pi**sample.d
    estimate = canonical_sum(terms) / sample.n
    z = two_sided_z(level)

    if variance == "plugin":
        if estimate <= 0.0:
            logger.debug("Non-positive density at {}, interval collapses", tuple(point))
            return IntervalEstimate(
                point=tuple(float(v) for v in point),
                estimate=estimate,
                lower=estimate,
                upper=estimate,
                level=1.0 - level,
                degenerate=True,
            )
        half = plugin_half_width(estimate, sample.n, cfg.R, sample.d, z)
    elif variance == "empirical":
        if sample.n < 2:
            raise DomainError("empirical variance needs n >= 2")
        half = z * math.sqrt(float(np.var(terms, ddof=1)) / sample.n)
    else:
        raise DomainError(f"unknown variance kind {variance!r}")

    return IntervalEstimate(
        point=tuple(float(v) for v in point),
        estimate=estimate,
        lower=estimate - half,
        upper=estimate + half,
        level=1.0 - level,
        degenerate=half == 0.0,
    )


def variance_limit_check(sample: SampleMatrix, x: ArrayLike, cfg: EstimatorConfig) -> float:
    """Sample variance of the terms prod K_R / pi^d, divided by R^d.

    Tends to p0(x) / pi^d as R grows.
    """
    if sample.n < 2:
        raise DomainError("variance check needs n >= 2")
    cfg.check_dimension(sample.d)
    point = as_point(x, sample.d)
    terms = kernel_terms(sample.data, point, cfg.R) / math.pi**sample.d
    return float(np.var(terms, ddof=1)) / cfg.R**sample.d


