"""Conditional modes of the joint (x, y) sinc density estimator.

M(x) = {y : d/dy f(x, y) = 0, d2/dy2 f(x, y) < 0}, found per x by scanning y on a
grid finer than the kernel resolution, bracketing + to - sign changes of the
y-derivative and refining each bracket by safeguarded Newton steps.

The sinc kernel rings, so the raw slice has small local maxima wherever the
design is sparse or a branch has an edge. A root is kept as a branch only when it
reaches `branch_fraction` of the slice maximum and its prominence on the scan
exceeds `prominence_z` standard errors of the estimate at the peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy.signal import peak_prominences

from sincsmooth.core.kernel import kernel_factors
from sincsmooth.core.numerics import canonical_sum, canonical_sum_rows, parallel_map
from sincsmooth.core.types import EstimatorConfig, LabeledSample, as_point, as_points
from sincsmooth.density.estimator import kernel_terms
from sincsmooth.errors import DomainError
from sincsmooth.modes.ascent import AscentConfig

_SCAN_BLOCK = 2_000_000
_MAX_REFINE = 200


@dataclass(frozen=True, slots=True)
class JointPartials:
    value: float
    dy: float
    dyy: float


@dataclass(frozen=True, slots=True)
class ConditionalModeSet:
    x: tuple[float, ...]
    modes_y: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    certificates: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True, slots=True)
class ModalCurve:
    x_grid: tuple[tuple[float, ...], ...]
    mode_sets: tuple[ConditionalModeSet, ...]


class _ResponseSlice:
    """f(x, .) and its y-derivatives for one fixed x."""

    def __init__(self, data: LabeledSample, x: NDArray[np.float64], R: float) -> None:  # noqa: N803
        self._weights = kernel_terms(data.x.data, x, R)
        self._y = data.y
        self._R = R
        self._scale = data.n * math.pi ** (data.d + 1)

    def at(self, y: float) -> JointPartials:
        k0, k1, k2 = kernel_factors(y - self._y, self._R, 2)
        return JointPartials(
            value=canonical_sum(self._weights * k0) / self._scale,
            dy=canonical_sum(self._weights * k1) / self._scale,
            dyy=canonical_sum(self._weights * k2) / self._scale,
        )

    def scan(
        self, ys: NDArray[np.float64]
    ) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        """Values, y-slopes and standard errors of f(x, y) at every y of the scan."""
        n = self._y.shape[0]
        values = np.empty(ys.shape[0])
        slopes = np.empty(ys.shape[0])
        spreads = np.zeros(ys.shape[0])
        block = max(1, _SCAN_BLOCK // n)
        for start in range(0, ys.shape[0], block):
            rows = slice(start, start + block)
            k0, k1 = kernel_factors(ys[rows, None] - self._y[None, :], self._R, 1)
            terms = self._weights * k0
            totals = canonical_sum_rows(terms)
            values[rows] = totals / self._scale
            slopes[rows] = canonical_sum_rows(self._weights * k1) / self._scale
            if n > 1:
                variance = (canonical_sum_rows(terms * terms) - totals * totals / n) / (n - 1)
                spreads[rows] = np.sqrt(np.maximum(n * variance, 0.0)) / self._scale
        return values, slopes, spreads


def joint_density_partials(
    data: LabeledSample, x: ArrayLike, y: float, cfg: EstimatorConfig
) -> JointPartials:
    """f(x, y) = sum_i prod_j K_R(x_j - X_ij) K_R(y - Y_i) / (n pi^(d+1)) with dy and dyy."""
    cfg.check_dimension(data.d)
    if not math.isfinite(y):
        raise DomainError("response value must be finite")
    return _ResponseSlice(data, as_point(x, data.d), cfg.R).at(float(y))


def default_y_range(data: LabeledSample, R: float) -> tuple[float, float]:  # noqa: N803
    margin = 3.0 / R
    return float(data.y.min()) - margin, float(data.y.max()) + margin


def _check_range(y_range: tuple[float, float]) -> tuple[float, float]:
    lower, upper = float(y_range[0]), float(y_range[1])
    if not (math.isfinite(lower) and math.isfinite(upper)) or not upper > lower:
        raise DomainError(f"y range must be finite with positive length, got {y_range}")
    return lower, upper


def _scan_peak(values: NDArray[np.float64], k: int) -> int:
    """Discrete local maximum of the scan reached by climbing from bracket index k."""
    peak = k
    while peak + 1 < values.shape[0] and values[peak + 1] > values[peak]:
        peak += 1
    while peak > 0 and values[peak - 1] > values[peak]:
        peak -= 1
    return peak


def _refine(
    slice_: _ResponseSlice, lower: float, upper: float, grad_tol: float
) -> tuple[float, JointPartials]:
    y = 0.5 * (lower + upper)
    partials = slice_.at(y)
    for _ in range(_MAX_REFINE):
        if abs(partials.dy) <= grad_tol:
            break
        if partials.dy > 0.0:
            lower = y
        else:
            upper = y
        step = y - partials.dy / partials.dyy if partials.dyy != 0.0 else math.nan
        y = step if lower < step < upper else 0.5 * (lower + upper)
        partials = slice_.at(y)
        if upper - lower <= 4.0 * np.finfo(np.float64).eps * max(1.0, abs(y)):
            break
    return y, partials


def conditional_modes(
    data: LabeledSample,
    x: ArrayLike,
    cfg: EstimatorConfig,
    search: AscentConfig | None = None,
    y_range: tuple[float, float] | None = None,
) -> ConditionalModeSet:
    cfg.check_dimension(data.d)
    search = search or AscentConfig()
    point = as_point(x, data.d)
    R = cfg.R
    lower, upper = _check_range(y_range or default_y_range(data, R))
    count = math.ceil((upper - lower) / (math.pi / (4.0 * R))) + 1
    ys = np.linspace(lower, upper, count)

    slice_ = _ResponseSlice(data, point, R)
    values, slopes, spreads = slice_.scan(ys)
    floor = search.branch_fraction * max(float(values.max()), 0.0)
    brackets = np.flatnonzero((slopes[:-1] > 0.0) & (slopes[1:] <= 0.0))
    peaks = np.array([_scan_peak(values, int(k)) for k in brackets], dtype=np.intp)
    prominences = peak_prominences(values, peaks)[0] if peaks.size else np.empty(0)

    found: list[tuple[float, JointPartials]] = []
    for k, peak, prominence in zip(brackets, peaks, prominences, strict=True):
        if prominence < search.prominence_z * spreads[peak]:
            logger.debug(
                "Ripple at y={:.4g} dropped: prominence {:.3g}, se {:.3g}",
                ys[peak],
                prominence,
                spreads[peak],
            )
            continue
        y, partials = _refine(slice_, float(ys[k]), float(ys[k + 1]), search.grad_tol)
        if abs(partials.dy) > search.grad_tol:
            logger.debug("Bracket [{:.6g}, {:.6g}] did not settle: dy={:.3g}", ys[k], ys[k + 1], partials.dy)
            continue
        if partials.dyy < 0.0 and partials.value > floor:
            found.append((y, partials))

    radius = search.radius_for(R)
    kept: list[tuple[float, JointPartials]] = []
    for y, partials in sorted(found, key=lambda item: (-item[1].value, item[0])):
        if all(abs(y - other) > radius for other, _ in kept):
            kept.append((y, partials))
    kept.sort(key=lambda item: item[0])

    return ConditionalModeSet(
        x=tuple(float(v) for v in point),
        modes_y=tuple(y for y, _ in kept),
        values=tuple(p.value for _, p in kept),
        certificates=tuple((p.dy, p.dyy) for _, p in kept),
    )


def modal_curve(
    data: LabeledSample,
    x_grid: ArrayLike,
    cfg: EstimatorConfig,
    search: AscentConfig | None = None,
    y_range: tuple[float, float] | None = None,
) -> ModalCurve:
    points = as_points(x_grid, data.d)
    if points.shape[0] == 0:
        raise DomainError("modal curve needs at least one predictor value")
    mode_sets = parallel_map(
        lambda x: conditional_modes(data, x, cfg, search, y_range), list(points), cfg.threads
    )
    logger.info(
        "Modal curve on {} points, up to {} branches",
        len(mode_sets),
        max(len(s.modes_y) for s in mode_sets),
    )
    return ModalCurve(
        x_grid=tuple(tuple(float(v) for v in point) for point in points),
        mode_sets=tuple(mode_sets),
    )
