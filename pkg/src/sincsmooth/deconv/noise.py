from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from sincsmooth.errors import DomainError, IllPosedError

_VANISHING_FT = 1e-12

AxisFt = Callable[[NDArray[np.float64]], NDArray[np.float64]]
JointFt = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True, slots=True)
class NoiseModel:
    """Known symmetric measurement-error density, described by its Fourier transform.

    Separable models act through a one-dimensional transform applied on every axis;
    a joint transform takes an (m, d) array of frequencies and returns m values.
    """

    kind: str
    scale: float = 0.0
    axis_transform: AxisFt | None = None
    joint_transform: JointFt | None = None
    dimension: int | None = None

    @classmethod
    def gaussian(cls, h: float, dimension: int | None = None) -> NoiseModel:
        if not h > 0.0:
            raise DomainError("gaussian noise scale must be positive")
        return cls(kind="gaussian", scale=float(h), dimension=dimension)

    @classmethod
    def laplace(cls, b: float, dimension: int | None = None) -> NoiseModel:
        if not b > 0.0:
            raise DomainError("laplace noise scale must be positive")
        return cls(kind="laplace", scale=float(b), dimension=dimension)

    @classmethod
    def custom(
        cls, ft: AxisFt | JointFt, *, separable: bool = False, dimension: int | None = None
    ) -> NoiseModel:
        if separable:
            return cls(kind="custom", axis_transform=ft, dimension=dimension)
        return cls(kind="custom", joint_transform=ft, dimension=dimension)

    @classmethod
    def point_mass(cls, dimension: int | None = None) -> NoiseModel:
        """No noise: ft == 1, deconvolution reduces to plain density estimation."""
        return cls.custom(np.ones_like, separable=True, dimension=dimension)

    @classmethod
    def parse(cls, spec: str) -> NoiseModel:
        name, _, value = spec.strip().partition(":")
        name = name.lower()
        if name in {"none", "point"}:
            return cls.point_mass()
        try:
            scale = float(value)
        except ValueError as exc:
            raise DomainError(f"noise spec {spec!r} needs a numeric scale, e.g. gaussian:0.1") from exc
        if name == "gaussian":
            return cls.gaussian(scale)
        if name == "laplace":
            return cls.laplace(scale)
        raise DomainError(f"unknown noise kind {name!r}; use gaussian, laplace or none")

    @property
    def separable(self) -> bool:
        return self.joint_transform is None

    def describe(self) -> str:
        if self.kind in {"gaussian", "laplace"}:
            return f"{self.kind}:{self.scale:g}"
        return "custom"

    def check_dimension(self, d: int) -> None:
        if self.dimension is not None and self.dimension != d:
            raise DomainError(f"noise model is {self.dimension}-dimensional, data has d={d}")

    def axis_ft(self, s: NDArray[np.float64]) -> NDArray[np.float64]:
        if self.kind == "gaussian":
            return np.exp(-0.5 * (self.scale * s) ** 2)
        if self.kind == "laplace":
            return 1.0 / (1.0 + (self.scale * s) ** 2)
        if self.axis_transform is None:
            raise DomainError("noise model has no per-axis transform")
        return _real(self.axis_transform(s))

    def joint_ft(self, frequencies: NDArray[np.float64]) -> NDArray[np.float64]:
        if self.joint_transform is not None:
            return _real(self.joint_transform(frequencies))
        return np.prod(self.axis_ft(frequencies), axis=1)

    def check_origin(self, d: int) -> None:
        origin = np.zeros((1, d))
        value = float(self.joint_ft(origin)[0])
        if not math.isclose(value, 1.0, rel_tol=1e-9, abs_tol=1e-9):
            raise DomainError(f"noise transform must equal 1 at the origin, got {value:.6g}")


def _real(values: NDArray[np.generic]) -> NDArray[np.float64]:
    array = np.asarray(values)
    if np.iscomplexobj(array):
        if np.max(np.abs(array.imag), initial=0.0) > 1e-12:
            raise DomainError("noise transform must be real (symmetric noise density)")
        array = array.real
    return array.astype(np.float64, copy=False)


def inverse_transform(
    ft_values: NDArray[np.float64],
    frequencies: NDArray[np.float64],
    *,
    power: int,
    max_inverse: float,
) -> NDArray[np.float64]:
    """1/ft at the given frequencies, refusing ill-posed inversions.

    `power` is the number of axes sharing this worst case (d for separable noise).
    `frequencies` has one row per value; the offending row's largest entry is reported.
    """
    magnitude = np.abs(ft_values)
    weakest = int(np.argmin(magnitude))
    if not magnitude[weakest] >= _VANISHING_FT:
        raise IllPosedError(
            "noise characteristic function vanishes on the frequency box",
            frequency=float(np.max(np.abs(np.atleast_1d(frequencies[weakest])))),
        )
    log_worst = -power * math.log(float(magnitude[weakest]))
    if log_worst > math.log(max_inverse):
        raise IllPosedError(
            f"1/ft reaches 1e{log_worst / math.log(10.0):.1f} > {max_inverse:.3g} on the frequency box",
            frequency=float(np.max(np.abs(np.atleast_1d(frequencies[weakest])))),
        )
    return 1.0 / ft_values
