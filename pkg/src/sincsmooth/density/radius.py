from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from loguru import logger

from sincsmooth.core.kernel import kernel_factors
from sincsmooth.core.types import (
    EstimatorConfig,
    OrdinarySmooth,
    SampleMatrix,
    Supersmooth,
    check_radius,
)
from sincsmooth.errors import DomainError

_PAIR_BLOCK = 2_000_000


def select_radius(cfg: EstimatorConfig, n: int) -> float:
    """Rate-optimal radius for the configured smoothness class.

    Supersmooth(alpha, C1): 2 C1 R^alpha = log n.
    OrdinarySmooth(beta): R^(d + 2(beta - 1)) = n.
    Unknown constants of the risk bounds are fixed to 1.
    """
    if n < 2:
        raise DomainError("radius rules need n >= 2")
    smoothness = cfg.smoothness
    if isinstance(smoothness, Supersmooth):
        return (math.log(n) / (2.0 * smoothness.c1)) ** (1.0 / smoothness.alpha)
    if isinstance(smoothness, OrdinarySmooth):
        if cfg.dimension is None:
            raise DomainError("ordinary smooth radius rule needs the dimension")
        return float(n) ** (1.0 / (cfg.dimension + 2.0 * (smoothness.beta - 1.0)))
    raise DomainError("no smoothness class configured for the radius rule")


def _pair_kernel_sum(sample: SampleMatrix, R: float) -> float:  # noqa: N803
    data = sample.data
    n, d = data.shape
    block = max(1, _PAIR_BLOCK // (n * d))
    total = 0.0
    for start in range(0, n, block):
        diffs = data[start : start + block, None, :] - data[None, :, :]
        total += float(np.prod(kernel_factors(diffs, R, 0)[0], axis=2).sum())
    return total


def lscv_score(sample: SampleMatrix, R: float) -> float:  # noqa: N803
    """Least-squares cross-validation criterion in closed form.

    Uses the reproducing identity  int K_R(x - a) K_R(x - b) dx = pi K_R(a - b):
    int f^2 = S / (n^2 pi^d) and the leave-one-out term is (S - n R^d) / (n (n-1) pi^d),
    where S sums the product kernel over all ordered pairs.
    """
    radius = check_radius(R)
    n, d = sample.n, sample.d
    if n < 3:
        raise DomainError("cross-validation needs n >= 3")
    pairs = _pair_kernel_sum(sample, radius)
    off_diagonal = pairs - n * radius**d
    scale = math.pi**d
    return pairs / (n * n * scale) - 2.0 * off_diagonal / (n * (n - 1) * scale)


def lscv_scores(sample: SampleMatrix, candidates: Sequence[float]) -> list[tuple[float, float]]:
    if not candidates:
        raise DomainError("no candidate radii supplied")
    radii = sorted({check_radius(candidate) for candidate in candidates})
    return [(radius, lscv_score(sample, radius)) for radius in radii]


def lscv_minimizer(scores: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Smallest-score candidate; ties go to the smaller radius."""
    best_radius, best_score = scores[0]
    for radius, score in scores[1:]:
        if score < best_score:
            best_radius, best_score = radius, score
    return best_radius, best_score


def select_radius_lscv(sample: SampleMatrix, candidates: Sequence[float]) -> float:
    scores = lscv_scores(sample, candidates)
    best_radius, best_score = lscv_minimizer(scores)
    logger.info(
        "LSCV picked R={:.4g} (score={:.6g}) from {} candidates",
        best_radius,
        best_score,
        len(scores),
    )
    return best_radius
