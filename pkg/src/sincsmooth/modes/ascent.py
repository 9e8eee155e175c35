"""Mode sets of the density and mixing-density estimators.

The sinc kernel is signed, so fixed-point mean-shift loses its ascent guarantee.
Modes are found by gradient ascent on the raw estimator instead: a Newton
direction where the Hessian is negative definite, the gradient elsewhere, with
Armijo backtracking and steps capped at a quarter of the kernel's main lobe.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.numerics import parallel_map, top_eigenvalue
from sincsmooth.core.rng import subsample_indices
from sincsmooth.core.types import EstimatorConfig, GridAxis, SampleMatrix, as_points, build_grid
from sincsmooth.deconv.estimator import deconv_partials
from sincsmooth.deconv.noise import NoiseModel
from sincsmooth.density.estimator import density_partials
from sincsmooth.errors import DomainError

Partials = Callable[[NDArray[np.float64]], tuple[float, NDArray[np.float64], NDArray[np.float64]]]

_ARMIJO = 1e-4
_MIN_STEP = 1e-12
_ROUNDOFF = 1e-12


class StartKind(StrEnum):
    DATA = "data"
    GRID = "grid"
    EXPLICIT = "explicit"


@dataclass(frozen=True, slots=True)
class AscentConfig:
    starts: StartKind = StartKind.DATA
    grid: tuple[GridAxis, ...] = ()
    explicit: tuple[tuple[float, ...], ...] = ()
    max_iter: int = 500
    grad_tol: float = 1e-7
    dedupe_radius: float | None = None
    step_shrink: float = 0.5
    ripple_fraction: float = 0.05
    max_starts: int | None = None
    branch_fraction: float = 0.1
    prominence_z: float = 2.5

    def __post_init__(self) -> None:
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")
        if not self.grad_tol > 0.0:
            raise DomainError("grad_tol must be positive")
        if not 0.0 < self.step_shrink < 1.0:
            raise DomainError("step_shrink must lie in (0, 1)")
        if self.dedupe_radius is not None and not self.dedupe_radius > 0.0:
            raise DomainError("dedupe_radius must be positive")
        if not 0.0 <= self.ripple_fraction < 1.0:
            raise DomainError("ripple_fraction must lie in [0, 1)")
        if self.max_starts is not None and self.max_starts < 1:
            raise DomainError("max_starts must be >= 1")
        if not 0.0 <= self.branch_fraction < 1.0:
            raise DomainError("branch_fraction must lie in [0, 1)")
        if not self.prominence_z >= 0.0:
            raise DomainError("prominence_z must not be negative")
        if self.starts is StartKind.GRID and not self.grid:
            raise DomainError("grid starts need at least one grid axis")
        if self.starts is StartKind.EXPLICIT and not self.explicit:
            raise DomainError("explicit starts need at least one point")

    def radius_for(self, R: float) -> float:  # noqa: N803
        return self.dedupe_radius if self.dedupe_radius is not None else math.pi / (2.0 * R)

    def start_points(self, sample: SampleMatrix, seed: int) -> NDArray[np.float64]:
        """Every candidate start, or a seeded subsample of `max_starts` of them."""
        if self.starts is StartKind.GRID:
            points = build_grid(self.grid)
        elif self.starts is StartKind.EXPLICIT:
            points = as_points(self.explicit, sample.d)
        else:
            points = sample.data
        if points.shape[1] != sample.d:
            raise DomainError(f"start points have dimension {points.shape[1]}, data has {sample.d}")
        if self.max_starts is None:
            return points
        return points[subsample_indices(points.shape[0], self.max_starts, seed)]


@dataclass(frozen=True, slots=True)
class AscentResult:
    point: NDArray[np.float64]
    value: float
    gradient_norm: float
    top_eig: float
    iterations: int
    converged: bool
    start_value: float = 0.0


@dataclass(frozen=True, slots=True)
class ModeSet:
    """Local maxima in descending order of estimated density."""

    modes: tuple[tuple[float, ...], ...] = ()
    values: tuple[float, ...] = ()
    gradient_norms: tuple[float, ...] = ()
    hessian_top_eigs: tuple[float, ...] = ()
    starts: int = 0
    converged: int = 0
    diagnostic: str | None = field(default=None, compare=False)

    @property
    def k(self) -> int:
        return len(self.modes)

    def as_array(self) -> NDArray[np.float64]:
        if not self.modes:
            return np.empty((0, 0))
        return np.array(self.modes, dtype=np.float64)


def _direction(grad: NDArray[np.float64], hess: NDArray[np.float64]) -> tuple[NDArray[np.float64], bool]:
    if top_eigenvalue(hess) < 0.0:
        return -np.linalg.solve(hess, grad), True
    return grad.copy(), False


def ascend(partials: Partials, start: ArrayLike, ascent: AscentConfig, max_step: float) -> AscentResult:
    """Backtracking ascent from one start; f never decreases beyond roundoff."""
    x = np.asarray(start, dtype=np.float64).copy()
    value, grad, hess = partials(x)
    start_value = value
    iterations = 0
    converged = False
    for iterations in range(1, ascent.max_iter + 1):
        if float(np.linalg.norm(grad)) <= ascent.grad_tol:
            converged = True
            break
        direction, newton = _direction(grad, hess)
        length = float(np.linalg.norm(direction))
        if length > max_step:
            direction *= max_step / length
        slope = float(grad @ direction)
        step = 1.0
        accepted = False
        while step >= _MIN_STEP:
            candidate = x + step * direction
            new_value, new_grad, new_hess = partials(candidate)
            if new_value >= value + _ARMIJO * step * slope:
                accepted = True
            elif newton and step == 1.0:
                # the increase is below summation noise this close to the maximum
                flat = new_value >= value - _ROUNDOFF * max(1.0, abs(value))
                accepted = flat and np.linalg.norm(new_grad) < np.linalg.norm(grad)
            if accepted:
                break
            step *= ascent.step_shrink
        if not accepted:
            break
        assert new_value >= value - _ROUNDOFF * max(1.0, abs(value)), "ascent step decreased f"
        x, value, grad, hess = candidate, new_value, new_grad, new_hess
    else:
        converged = float(np.linalg.norm(grad)) <= ascent.grad_tol

    return AscentResult(
        point=x,
        value=value,
        gradient_norm=float(np.linalg.norm(grad)),
        top_eig=top_eigenvalue(hess),
        iterations=iterations,
        converged=converged,
        start_value=start_value,
    )


def dedupe(results: list[AscentResult], radius: float, ripple_fraction: float) -> list[AscentResult]:
    """Certified maxima above the ripple floor, one per cluster of nearby points, highest first.

    The floor is `ripple_fraction` times the largest estimate seen at any start point.
    """
    certified = [r for r in results if r.converged and r.top_eig < 0.0 and r.value > 0.0]
    if not certified:
        return []
    floor = ripple_fraction * max(0.0, max(r.start_value for r in results))
    ordered = sorted(
        (r for r in certified if r.value >= floor),
        key=lambda r: (-r.value, tuple(r.point)),
    )
    kept: list[AscentResult] = []
    for result in ordered:
        if all(np.linalg.norm(result.point - other.point) > radius for other in kept):
            kept.append(result)
    return kept


def find_modes(
    partials: Partials,
    starts: NDArray[np.float64],
    cfg: EstimatorConfig,
    ascent: AscentConfig,
    *,
    label: str,
) -> ModeSet:
    started_at = time.monotonic()
    max_step = math.pi / (4.0 * cfg.R)
    results = parallel_map(
        lambda start: ascend(partials, start, ascent, max_step), list(starts), cfg.threads
    )
    converged = sum(1 for result in results if result.converged)
    kept = dedupe(results, ascent.radius_for(cfg.R), ascent.ripple_fraction)
    diagnostic = None
    if not kept:
        diagnostic = f"no certified maximum from {len(results)} starts ({converged} converged)"
        logger.warning("{}: {}", label, diagnostic)
    logger.info(
        "{}: {} modes from {} starts ({} converged) in {:.2f}s",
        label,
        len(kept),
        len(results),
        converged,
        time.monotonic() - started_at,
    )
    return ModeSet(
        modes=tuple(tuple(float(v) for v in r.point) for r in kept),
        values=tuple(r.value for r in kept),
        gradient_norms=tuple(r.gradient_norm for r in kept),
        hessian_top_eigs=tuple(r.top_eig for r in kept),
        starts=len(results),
        converged=converged,
        diagnostic=diagnostic,
    )


def find_modes_density(sample: SampleMatrix, cfg: EstimatorConfig, ascent: AscentConfig) -> ModeSet:
    cfg.check_dimension(sample.d)
    return find_modes(
        lambda x: density_partials(sample, x, cfg),
        ascent.start_points(sample, cfg.seed),
        cfg,
        ascent,
        label="density modes",
    )


def find_modes_mixing(
    sample: SampleMatrix, noise: NoiseModel, cfg: EstimatorConfig, ascent: AscentConfig
) -> ModeSet:
    cfg.check_dimension(sample.d)
    return find_modes(
        lambda theta: deconv_partials(sample, theta, noise, cfg),
        ascent.start_points(sample, cfg.seed),
        cfg,
        ascent,
        label="mixing modes",
    )
