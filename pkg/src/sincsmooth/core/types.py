from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import TYPE_CHECKING, Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sincsmooth.errors import DomainError

if TYPE_CHECKING:
    from sincsmooth.config import Settings


def check_radius(value: float) -> float:
    radius = float(value)
    if not math.isfinite(radius) or radius <= 0.0:
        raise DomainError(f"radius must be positive and finite, got {value!r}")
    return radius


def check_tau(tau: float) -> float:
    level = float(tau)
    if not 0.0 < level < 1.0:
        raise DomainError(f"tau must be in (0, 1), got {tau!r}")
    return level


def as_point(value: ArrayLike, d: int) -> NDArray[np.float64]:
    point = np.atleast_1d(np.asarray(value, dtype=np.float64))
    if point.ndim != 1 or point.shape[0] != d:
        raise DomainError(f"point has dimension {point.shape}, expected ({d},)")
    if not np.all(np.isfinite(point)):
        raise DomainError("point has non-finite coordinates")
    return point


def as_points(values: ArrayLike, d: int) -> NDArray[np.float64]:
    """Coerce a list of points to an (m, d) array; scalars are accepted when d == 1."""
    points = np.asarray(values, dtype=np.float64)
    if points.size == 0:
        return np.empty((0, d), dtype=np.float64)
    if points.ndim == 1 and d == 1:
        points = points[:, None]
    if points.ndim != 2 or points.shape[1] != d:
        raise DomainError(f"points have shape {points.shape}, expected (m, {d})")
    if not np.all(np.isfinite(points)):
        raise DomainError("points have non-finite coordinates")
    return points


def _frozen_matrix(values: ArrayLike, *, what: str, min_rows: int) -> NDArray[np.float64]:
    data = np.array(values, dtype=np.float64)
    if data.ndim == 1:
        data = data[:, None]
    if data.ndim != 2:
        raise DomainError(f"{what} must be a 2-D matrix, got {data.ndim} dimensions")
    if data.shape[0] < min_rows or data.shape[1] < 1:
        raise DomainError(f"{what} needs at least {min_rows} row(s) and 1 column")
    if not np.all(np.isfinite(data)):
        raise DomainError(f"{what} has non-finite entries")
    data.setflags(write=False)
    return data


@dataclass(frozen=True, slots=True, eq=False)
class SampleMatrix:
    data: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", _frozen_matrix(self.data, what="sample", min_rows=1))

    @property
    def n(self) -> int:
        return int(self.data.shape[0])

    @property
    def d(self) -> int:
        return int(self.data.shape[1])


@dataclass(frozen=True, slots=True, eq=False)
class LabeledSample:
    x: SampleMatrix
    y: NDArray[np.float64]

    def __post_init__(self) -> None:
        x = self.x if isinstance(self.x, SampleMatrix) else SampleMatrix(self.x)
        y = np.array(self.y, dtype=np.float64).ravel()
        if y.shape[0] != x.n:
            raise DomainError(f"response has {y.shape[0]} values for {x.n} rows")
        if not np.all(np.isfinite(y)):
            raise DomainError("response has non-finite entries")
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.n

    @property
    def d(self) -> int:
        return self.x.d


@dataclass(frozen=True, slots=True, eq=False)
class MarkovSeries:
    data: NDArray[np.float64]

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", _frozen_matrix(self.data, what="series", min_rows=2))

    @property
    def T(self) -> int:  # noqa: N802
        return int(self.data.shape[0])

    @property
    def d(self) -> int:
        return int(self.data.shape[1])


@dataclass(frozen=True, slots=True)
class Supersmooth:
    alpha: float
    c1: float

    def __post_init__(self) -> None:
        if not self.alpha > 0.0:
            raise DomainError("supersmooth order alpha must be positive")
        if not self.c1 > 0.0:
            raise DomainError("supersmooth constant C1 must be positive")


@dataclass(frozen=True, slots=True)
class OrdinarySmooth:
    beta: float

    def __post_init__(self) -> None:
        if not self.beta > 1.0:
            raise DomainError("ordinary smooth order beta must exceed 1")


Smoothness = Supersmooth | OrdinarySmooth


class ClipMode(StrEnum):
    NONE = "none"
    MAX_WITH_ZERO = "max"
    ABSOLUTE = "abs"

    def apply(self, value: float) -> float:
        if self is ClipMode.MAX_WITH_ZERO:
            return max(value, 0.0)
        if self is ClipMode.ABSOLUTE:
            return abs(value)
        return value


@dataclass(frozen=True, slots=True)
class EstimatorConfig:
    radius: float | None = None
    dimension: int | None = None
    smoothness: Smoothness | None = None
    clip_mode: ClipMode = ClipMode.MAX_WITH_ZERO
    quad_nodes_per_radius: int = 8
    qmc_points: int = 16384
    max_inverse_ft: float = 1e12
    denominator_floor_scale: float = 1e-10
    sigma2_cap: int = 4000
    reliability_z: float = 2.0
    threads: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.radius is not None:
            object.__setattr__(self, "radius", check_radius(self.radius))
        if self.dimension is not None and self.dimension < 1:
            raise DomainError("dimension must be at least 1")
        if not self.reliability_z >= 0.0:
            raise DomainError("reliability_z must not be negative")

    @property
    def R(self) -> float:  # noqa: N802
        if self.radius is None:
            raise DomainError("no radius configured; pass R or select one first")
        return self.radius

    def with_radius(self, radius: float) -> EstimatorConfig:
        return replace(self, radius=radius)

    def check_dimension(self, d: int) -> None:
        if self.dimension is not None and self.dimension != d:
            raise DomainError(f"data dimension {d} does not match configured {self.dimension}")

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Any) -> EstimatorConfig:
        values: dict[str, Any] = {
            "quad_nodes_per_radius": settings.quad_nodes_per_radius,
            "qmc_points": settings.qmc_points,
            "max_inverse_ft": settings.max_inverse_ft,
            "denominator_floor_scale": settings.denominator_floor_scale,
            "sigma2_cap": settings.sigma2_cap,
            "reliability_z": settings.reliability_z,
            "threads": settings.threads,
        }
        values.update(overrides)
        return cls(**values)


@dataclass(frozen=True, slots=True)
class IntervalEstimate:
    point: tuple[float, ...]
    estimate: float
    lower: float
    upper: float
    level: float
    degenerate: bool = False

    @property
    def half_width(self) -> float:
        return 0.5 * (self.upper - self.lower)


@dataclass(frozen=True, slots=True, eq=False)
class DerivativeTensor:
    order: int
    entries: NDArray[np.float64] = field(repr=False)

    def __getitem__(self, index: int | tuple[int, ...]) -> float:
        return float(self.entries[index])


@dataclass(frozen=True, slots=True)
class GridAxis:
    lower: float
    upper: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise DomainError("grid count must be at least 1")
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("grid bounds must be finite")
        if self.upper < self.lower:
            raise DomainError("grid upper bound is below lower bound")

    def points(self) -> NDArray[np.float64]:
        return np.linspace(self.lower, self.upper, self.count)

    @property
    def spacing(self) -> float:
        return (self.upper - self.lower) / (self.count - 1) if self.count > 1 else 0.0


def build_grid(axes: Sequence[GridAxis]) -> NDArray[np.float64]:
    """Cartesian product of axis grids, first axis varying slowest."""
    if not axes:
        raise DomainError("grid needs at least one axis")
    mesh = np.meshgrid(*(axis.points() for axis in axes), indexing="ij")
    return np.stack([component.ravel() for component in mesh], axis=1)
