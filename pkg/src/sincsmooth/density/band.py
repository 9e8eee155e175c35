from __future__ import annotations

import math
import time
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.numerics import canonical_sum_rows, parallel_map
from sincsmooth.core.rng import stream
from sincsmooth.core.types import EstimatorConfig, SampleMatrix, as_points, check_tau
from sincsmooth.density.estimator import kernel_terms, normalizer
from sincsmooth.errors import DomainError


@dataclass(frozen=True, slots=True, eq=False)
class BootstrapPlan:
    B: int  # noqa: N815
    seed: int
    grid: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.B < 1:
            raise DomainError("bootstrap needs B >= 1 replicates")
        grid = np.asarray(self.grid, dtype=np.float64)
        if grid.ndim == 1:
            grid = grid[:, None]
        if grid.shape[0] == 0:
            raise DomainError("bootstrap grid is empty")
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True, slots=True, eq=False)
class BandEstimate:
    grid: NDArray[np.float64]
    center: NDArray[np.float64]
    half_width: NDArray[np.float64]
    level: float
    replicates: int
    eta: float
    statistics: NDArray[np.float64] = field(repr=False)

    @property
    def lower(self) -> NDArray[np.float64]:
        return self.center - self.half_width

    @property
    def upper(self) -> NDArray[np.float64]:
        return self.center + self.half_width


def sup_deviation(
    f_star: Sequence[float] | NDArray[np.float64],
    f_hat: Sequence[float] | NDArray[np.float64],
    n: int,
    R: float,  # noqa: N803
    d: int,
) -> float:
    star = np.asarray(f_star, dtype=np.float64)
    center = np.asarray(f_hat, dtype=np.float64)
    if star.shape != center.shape:
        raise DomainError(f"length mismatch: {star.shape} vs {center.shape}")
    if star.size == 0:
        return 0.0
    return math.sqrt(n / R**d) * float(np.max(np.abs(star - center)))


def quantile_order(tau: float, B: int) -> int:  # noqa: N803
    """1-based order statistic ceil((1 - tau) B), clamped to [1, B]."""
    return min(B, max(1, math.ceil(round((1.0 - tau) * B, 9))))


def _warn_on_coarse_grid(grid: NDArray[np.float64], R: float) -> None:  # noqa: N803
    limit = math.pi / (4.0 * R)
    for axis in range(grid.shape[1]):
        values = np.unique(grid[:, axis])
        if values.size > 1 and float(np.max(np.diff(values))) > limit:
            logger.warning(
                "Band grid spacing on axis {} exceeds pi/(4R)={:.4g}; sup may be underestimated",
                axis + 1,
                limit,
            )


def bootstrap_band(
    sample: SampleMatrix, cfg: EstimatorConfig, plan: BootstrapPlan, tau: float
) -> BandEstimate:
    """Uniform band f(x) +- eta sqrt(R^d / n) from B nonparametric bootstrap replicates.

    Replicate b resamples rows with stream b of the plan's seed and records
    T_b = sqrt(n / R^d) max_grid |f*_b - f|; eta is the ceil((1 - tau) B)-th smallest T_b.
    """
    level = check_tau(tau)
    cfg.check_dimension(sample.d)
    grid = as_points(plan.grid, sample.d)
    n, d, R = sample.n, sample.d, cfg.R
    if plan.B * level < 1.0:
        logger.warning("B*tau = {:.3g} < 1: the band quantile is the sample maximum", plan.B * level)
    _warn_on_coarse_grid(grid, R)

    started_at = time.monotonic()
    terms = np.stack([kernel_terms(sample.data, point, R) for point in grid])
    scale = normalizer(n, d)
    center = canonical_sum_rows(terms) / scale

    def replicate(index: int) -> float:
        rows = stream(plan.seed, index).integers(0, n, size=n)
        counts = np.bincount(rows, minlength=n).astype(np.float64)
        f_star = canonical_sum_rows(terms * counts[None, :]) / scale
        return sup_deviation(f_star, center, n, R, d)

    statistics = np.array(parallel_map(replicate, list(range(plan.B)), cfg.threads))
    ordered = np.sort(statistics)
    eta = float(ordered[quantile_order(level, plan.B) - 1])
    half = np.full(center.shape, eta * math.sqrt(R**d / n))

    logger.info(
        "Bootstrap band: B={}, grid={}, eta={:.4g}, {:.2f}s",
        plan.B,
        grid.shape[0],
        eta,
        time.monotonic() - started_at,
    )
    return BandEstimate(
        grid=grid,
        center=center,
        half_width=half,
        level=1.0 - level,
        replicates=plan.B,
        eta=eta,
        statistics=statistics,
    )
