"""Seeded generators for the seven worked examples.

Every generator draws from `stream(seed, stream_index)` in a fixed order, so a spec
fully determines its data. Parameters not listed in an example's defaults are
rejected as overrides.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import IntEnum
from types import MappingProxyType

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.rng import stream
from sincsmooth.core.types import LabeledSample, MarkovSeries, SampleMatrix
from sincsmooth.errors import DomainError
from sincsmooth.markov.simulate import simulate_ar1, simulate_coupled_ar


class ExampleId(IntEnum):
    EX1 = 1
    EX2 = 2
    EX3 = 3
    EX4 = 4
    EX5 = 5
    EX6 = 6
    EX7 = 7


_DEFAULTS: dict[ExampleId, dict[str, float]] = {
    ExampleId.EX1: {"noise": 1.0, "coupling": 0.1, "independent": 0.0},
    ExampleId.EX2: {"noise": 0.01},
    ExampleId.EX3: {"noise": 0.01},
    ExampleId.EX4: {"h": 0.1, "weight": 0.6, "center": 2.0, "sd": 0.6},
    ExampleId.EX5: {"sd": 0.6, "half_width": 2.0},
    ExampleId.EX6: {"rho": 0.6, "x0": 0.5, "dim": 1.0, "rho1": 0.3, "rho2": 0.7, "x0_2": 0.2},
    ExampleId.EX7: {"rho": 0.1, "sd": 0.1, "p0": 100.0},
}

_DEFAULT_N = {
    ExampleId.EX1: 1000,
    ExampleId.EX2: 100_000,
    ExampleId.EX3: 100_000,
    ExampleId.EX4: 10_000,
    ExampleId.EX5: 10_000,
    ExampleId.EX6: 10_000,
    ExampleId.EX7: 9311,
}

_FULL_N = {ExampleId.EX2: 1_000_000}

# radius each example is analysed with
EXAMPLE_RADIUS = {
    ExampleId.EX1: 9.0,
    ExampleId.EX2: 7.0,
    ExampleId.EX3: 5.0,
    ExampleId.EX4: 5.0,
    ExampleId.EX5: 7.0,
    ExampleId.EX6: 4.0,
    ExampleId.EX7: 50.0,
}


@dataclass(frozen=True, slots=True)
class ExampleSpec:
    id: ExampleId
    n: int | None = None
    seed: int = 0
    overrides: Mapping[str, float] = field(default_factory=dict)
    full_scale: bool = False
    stream_index: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", ExampleId(self.id))
        if self.n is not None and self.n < 1:
            raise DomainError(f"sample size must be at least 1, got {self.n}")
        unknown = sorted(set(self.overrides) - set(_DEFAULTS[self.id]))
        if unknown:
            raise DomainError(f"unknown parameters for example {int(self.id)}: {', '.join(unknown)}")
        object.__setattr__(self, "overrides", MappingProxyType(dict(self.overrides)))

    @property
    def size(self) -> int:
        if self.n is not None:
            return self.n
        if self.full_scale and self.id in _FULL_N:
            return _FULL_N[self.id]
        if self.id is ExampleId.EX6 and self.params["dim"] == 2.0:
            return 100_000
        return _DEFAULT_N[self.id]

    @property
    def params(self) -> dict[str, float]:
        return {**_DEFAULTS[self.id], **self.overrides}


def _nonnegative(params: Mapping[str, float], key: str) -> float:
    value = float(params[key])
    if not (math.isfinite(value) and value >= 0.0):
        raise DomainError(f"{key} must be finite and non-negative, got {value}")
    return value


def _positive(params: Mapping[str, float], key: str) -> float:
    value = _nonnegative(params, key)
    if value == 0.0:
        raise DomainError(f"{key} must be positive")
    return value


def _example1(n: int, rng: np.random.Generator, params: Mapping[str, float]) -> LabeledSample:
    noise = _nonnegative(params, "noise")
    coupling = float(params["coupling"])
    independent = params["independent"]
    if independent not in (0.0, 1.0):
        raise DomainError("independent must be 0 or 1")
    x1 = rng.standard_normal(n)
    z = rng.standard_normal(n)
    eps = rng.standard_normal(n)
    x2 = z if independent else x1 + coupling * z
    y = x1**2 - 3.0 * x2 + noise * eps
    return LabeledSample(np.column_stack([x1, x2]), y)


def linear_coefficients(d: int) -> NDArray[np.float64]:
    return np.arange(1, d + 1, dtype=np.float64) / 4.0


def _linear(n: int, d: int, rng: np.random.Generator, params: Mapping[str, float]) -> LabeledSample:
    noise = _nonnegative(params, "noise")
    x = rng.standard_normal((n, d))
    eps = rng.standard_normal(n)
    return LabeledSample(x, x @ linear_coefficients(d) + noise * eps)


def _example4(n: int, rng: np.random.Generator, params: Mapping[str, float]) -> SampleMatrix:
    h = _nonnegative(params, "h")
    weight = float(params["weight"])
    if not 0.0 <= weight <= 1.0:
        raise DomainError("mixture weight must lie in [0, 1]")
    center = float(params["center"])
    sd = _positive(params, "sd")
    left = rng.random(n) < weight
    theta = np.where(left, -center, center) + sd * rng.standard_normal(n)
    return SampleMatrix((theta + h * rng.standard_normal(n)).reshape(-1, 1))


def _example5(n: int, rng: np.random.Generator, params: Mapping[str, float]) -> LabeledSample:
    sd = _nonnegative(params, "sd")
    half_width = _positive(params, "half_width")
    x = rng.uniform(-half_width, half_width, n)
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    y = sign * x**2 + sd * rng.standard_normal(n)
    return LabeledSample(x.reshape(-1, 1), y)


def _example6(n: int, seed: int, index: int, params: Mapping[str, float]) -> MarkovSeries:
    dim = params["dim"]
    if dim == 1.0:
        return simulate_ar1(n, params["rho"], params["x0"], seed, stream_index=index)
    if dim == 2.0:
        return simulate_coupled_ar(
            n,
            params["rho"],
            params["rho1"],
            params["rho2"],
            (params["x0"], params["x0_2"]),
            seed,
            stream_index=index,
        )
    raise DomainError(f"example 6 runs in dimension 1 or 2, got {dim}")


def _example7(n: int, rng: np.random.Generator, params: Mapping[str, float]) -> MarkovSeries:
    """Price path whose scaled log returns follow a stationary AR(1)."""
    rho = float(params["rho"])
    if not abs(rho) < 1.0:
        raise DomainError(f"rho must lie in (-1, 1), got {rho}")
    sd = _positive(params, "sd")
    p0 = _positive(params, "p0")
    if n < 2:
        raise DomainError("a price path needs at least 2 points")
    shocks = rng.standard_normal(n - 1)
    returns = np.empty(n - 1)
    returns[0] = sd * shocks[0]
    innovation = sd * math.sqrt(1.0 - rho * rho)
    for t in range(1, n - 1):
        returns[t] = rho * returns[t - 1] + innovation * shocks[t]
    prices = p0 * np.exp(np.concatenate([[0.0], np.cumsum(returns / 10.0)]))
    return MarkovSeries(prices.reshape(-1, 1))


def generate(spec: ExampleSpec) -> LabeledSample | SampleMatrix | MarkovSeries:
    n = spec.size
    params = spec.params
    if spec.id is ExampleId.EX6:
        return _example6(n, spec.seed, spec.stream_index, params)
    rng = stream(spec.seed, spec.stream_index)
    if spec.id is ExampleId.EX1:
        return _example1(n, rng, params)
    if spec.id is ExampleId.EX2:
        return _linear(n, 4, rng, params)
    if spec.id is ExampleId.EX3:
        return _linear(n, 5, rng, params)
    if spec.id is ExampleId.EX4:
        return _example4(n, rng, params)
    if spec.id is ExampleId.EX5:
        return _example5(n, rng, params)
    return _example7(n, rng, params)


def regression_curve(example: ExampleId, t: ArrayLike) -> NDArray[np.float64]:
    """Points of the curve along which examples 2 and 3 are estimated."""
    s = np.asarray(t, dtype=np.float64).reshape(-1)
    if example is ExampleId.EX2:
        return np.column_stack(
            [np.sqrt(s + 2.0), s, np.sin(25.0 * (s + 2.0) / math.pi), np.exp((s + 2.0) / 4.0)]
        )
    if example is ExampleId.EX3:
        return np.repeat(s[:, None], 5, axis=1)
    raise DomainError(f"example {int(example)} has no regression curve")


def curve_range(example: ExampleId) -> tuple[float, float]:
    if example is ExampleId.EX2:
        return -0.4, 0.4
    if example is ExampleId.EX3:
        return -0.6, 0.6
    raise DomainError(f"example {int(example)} has no regression curve")


def true_regression(example: ExampleId, x: ArrayLike) -> NDArray[np.float64]:
    points = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if example is ExampleId.EX1:
        return points[:, 0] ** 2 - 3.0 * points[:, 1]
    if example in (ExampleId.EX2, ExampleId.EX3):
        return points @ linear_coefficients(points.shape[1])
    raise DomainError(f"example {int(example)} has no regression function")
