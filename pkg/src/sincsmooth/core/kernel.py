"""The Fourier kernel K_R(u) = sin(Ru)/u, its derivatives and products.

All derivatives are taken of the unit function s(t) = sin(t)/t and rescaled:
d^k/du^k K_R(u) = R^(k+1) s^(k)(Ru). Near t = 0 the closed forms cancel
catastrophically, so a Taylor series takes over below a per-order threshold.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.numerics import gauss_legendre_panels
from sincsmooth.core.types import check_radius
from sincsmooth.errors import DomainError

MAX_ORDER = 3
VALUE_SERIES_THRESHOLD = 1e-4
DERIVATIVE_SERIES_THRESHOLD = 0.5
_VALUE_SERIES_TERMS = 6
_DERIVATIVE_SERIES_TERMS = 12


def _series_coefficients(order: int, terms: int) -> tuple[NDArray[np.float64], NDArray[np.int64]]:
    coefficients: list[float] = []
    powers: list[int] = []
    k = 0
    while len(coefficients) < terms:
        power = 2 * k - order
        if power >= 0:
            coefficients.append(
                (-1) ** k
                * math.factorial(2 * k)
                / (math.factorial(power) * math.factorial(2 * k + 1))
            )
            powers.append(power)
        k += 1
    # highest power first so the smallest terms are accumulated first
    return np.array(coefficients[::-1]), np.array(powers[::-1], dtype=np.int64)


_SERIES = {
    0: _series_coefficients(0, _VALUE_SERIES_TERMS),
    **{order: _series_coefficients(order, _DERIVATIVE_SERIES_TERMS) for order in (1, 2, 3)},
}


def _series(t: NDArray[np.float64], order: int) -> NDArray[np.float64]:
    coefficients, powers = _SERIES[order]
    out = np.zeros_like(t)
    for coefficient, power in zip(coefficients, powers, strict=True):
        out += coefficient * t**power
    return out


def _closed_form(t: NDArray[np.float64], order: int) -> NDArray[np.float64]:
    sin_t = np.sin(t)
    if order == 0:
        return sin_t / t
    cos_t = np.cos(t)
    if order == 1:
        return (t * cos_t - sin_t) / t**2
    if order == 2:
        return (-(t**2) * sin_t - 2.0 * t * cos_t + 2.0 * sin_t) / t**3
    return (-(t**3) * cos_t + 3.0 * t**2 * sin_t + 6.0 * t * cos_t - 6.0 * sin_t) / t**4


def unit_sinc(t: NDArray[np.float64], order: int = 0) -> NDArray[np.float64]:
    """d^order/dt^order of sin(t)/t, elementwise, no validation."""
    threshold = VALUE_SERIES_THRESHOLD if order == 0 else DERIVATIVE_SERIES_THRESHOLD
    small = np.abs(t) < threshold
    if not small.any():
        return _closed_form(t, order)
    if small.all():
        return _series(t, order)
    out = np.empty_like(t)
    out[small] = _series(t[small], order)
    out[~small] = _closed_form(t[~small], order)
    return out


def kernel_factors(
    diff: NDArray[np.float64], radius: float, max_order: int
) -> list[NDArray[np.float64]]:
    """[K_R, K_R', ..., K_R^(max_order)] evaluated at every entry of `diff`."""
    t = radius * diff
    return [radius ** (order + 1) * unit_sinc(t, order) for order in range(max_order + 1)]


def _check_order(order: int) -> None:
    if order not in range(1, MAX_ORDER + 1):
        raise DomainError(f"kernel derivative order must be 1..{MAX_ORDER}, got {order}")


def _evaluate(u: ArrayLike, radius: float, order: int) -> float | NDArray[np.float64]:
    R = check_radius(radius)
    values = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise DomainError("kernel argument must be finite")
    result = R ** (order + 1) * unit_sinc(np.atleast_1d(values), order)
    if values.ndim == 0:
        return float(result[0])
    return result.reshape(values.shape)


def sinc_kernel(u: ArrayLike, R: float) -> float | NDArray[np.float64]:  # noqa: N803
    return _evaluate(u, R, 0)


def sinc_kernel_deriv(u: ArrayLike, R: float, order: int) -> float | NDArray[np.float64]:  # noqa: N803
    _check_order(order)
    return _evaluate(u, R, order)


def product_kernel(x: ArrayLike, xi: ArrayLike, R: float) -> float:  # noqa: N803
    left = np.atleast_1d(np.asarray(x, dtype=np.float64))
    right = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if left.shape != right.shape or left.ndim != 1:
        raise DomainError(f"dimension mismatch: {left.shape} vs {right.shape}")
    return float(np.prod(sinc_kernel(left - right, R)))


def _product_excluding(f0: NDArray[np.float64], skip: Sequence[int]) -> NDArray[np.float64]:
    keep = [axis for axis in range(f0.shape[1]) if axis not in skip]
    if not keep:
        return np.ones(f0.shape[0])
    return np.prod(f0[:, keep], axis=1)


def product_terms(factors: Sequence[NDArray[np.float64]], order: int) -> NDArray[np.float64]:
    """Per-row partial derivatives of a product of per-axis factors.

    `factors[k]` is an (n, d) array holding the k-th derivative of each axis factor.
    Returns shape (n,) for order 0, (n, d) for order 1 and a symmetric (n, d, d)
    for order 2. No division is involved, so zeros of a factor are harmless.
    """
    f0 = factors[0]
    n, d = f0.shape
    if order == 0:
        return np.prod(f0, axis=1)
    if order == 1:
        f1 = factors[1]
        grad = np.empty((n, d))
        for j in range(d):
            grad[:, j] = f1[:, j] * _product_excluding(f0, (j,))
        return grad
    if order == 2:
        f1, f2 = factors[1], factors[2]
        hess = np.empty((n, d, d))
        for j in range(d):
            hess[:, j, j] = f2[:, j] * _product_excluding(f0, (j,))
            for k in range(j + 1, d):
                hess[:, j, k] = f1[:, j] * f1[:, k] * _product_excluding(f0, (j, k))
                hess[:, k, j] = hess[:, j, k]
        return hess
    raise DomainError(f"product derivative order must be 0, 1 or 2, got {order}")


def fourier_integral(
    func: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    x: float,
    R: float,  # noqa: N803
    window: tuple[float, float],
    *,
    per_panel: int = 16,
) -> float:
    """(1/pi) * integral of K_R(x - t) func(t) dt over `window`.

    The finite-R approximation of func(x); the integration window should cover the
    effective support of `func`. Panels are half a kernel period wide.
    """
    radius = check_radius(R)
    lower, upper = window
    if not upper > lower:
        raise DomainError("integration window must have positive length")
    panels = max(1, math.ceil((upper - lower) * radius / math.pi))
    nodes, weights = gauss_legendre_panels(lower, upper, panels, per_panel)
    kernel = radius * unit_sinc(radius * (x - nodes), 0)
    return float(np.sum(weights * kernel * func(nodes)) / math.pi)
