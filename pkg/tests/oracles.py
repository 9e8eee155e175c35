from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import brentq
from scipy.special import erf
from scipy.stats import norm

from sincsmooth.core.rng import stream
from sincsmooth.core.types import LabeledSample, SampleMatrix


def expected_density_at_zero(R: float) -> float:  # noqa: N803
    """E f_R(0) for a standard normal sample: (1/2pi) int_-R^R exp(-s^2/2) ds."""
    return float(erf(R / math.sqrt(2.0)) / math.sqrt(2.0 * math.pi))


def normal_sample(n: int, seed: int, index: int = 0, d: int = 1) -> SampleMatrix:
    return SampleMatrix(stream(seed, index).standard_normal((n, d)))


def mixture_pdf(
    theta: ArrayLike, weight: float = 0.6, center: float = 2.0, sd: float = 0.6
) -> NDArray[np.float64]:
    t = np.asarray(theta, dtype=np.float64)
    return weight * norm.pdf(t, -center, sd) + (1.0 - weight) * norm.pdf(t, center, sd)


def ar1_transition_pdf(y: ArrayLike, x: float, rho: float) -> NDArray[np.float64]:
    return norm.pdf(np.asarray(y, dtype=np.float64), rho * x, math.sqrt(1.0 - rho * rho))


def coupled_transition_pdf(
    y: NDArray[np.float64], x: tuple[float, float], rho: float, rho1: float, rho2: float
) -> NDArray[np.float64]:
    first = norm.pdf(y[:, 0], rho * x[0], math.sqrt(1.0 - rho * rho))
    second = norm.pdf(
        y[:, 1], rho1 * x[0] + rho2 * x[1], math.sqrt(1.0 - rho1 * rho1 - rho2 * rho2)
    )
    return first * second


def smooth_design(n: int, sigma: float, seed: int) -> LabeledSample:
    """Equally spaced design on [-3, 3] with m(x) = sin x + x / 2 and N(0, sigma^2) noise."""
    x = np.linspace(-3.0, 3.0, n)
    y = np.sin(x) + 0.5 * x + sigma * stream(seed).standard_normal(n)
    return LabeledSample(x.reshape(-1, 1), y)


def conditional_histogram(
    series: ArrayLike, x: float, half_width: float, edges: ArrayLike
) -> NDArray[np.float64]:
    """Histogram density of the next value over steps that start within half_width of x."""
    values = np.asarray(series, dtype=np.float64).reshape(-1)
    previous, following = values[:-1], values[1:]
    selected = following[np.abs(previous - x) <= half_width]
    counts, bins = np.histogram(selected, bins=np.asarray(edges, dtype=np.float64))
    return counts / (selected.shape[0] * np.diff(bins))


def mixture_modes(weight: float = 0.6, center: float = 2.0, sd: float = 0.6) -> list[float]:
    """Exact local maxima of the two-component mixture, one near each centre."""

    def slope(t: float) -> float:
        left = weight * (-(t + center) / sd**2) * norm.pdf(t, -center, sd)
        right = (1.0 - weight) * (-(t - center) / sd**2) * norm.pdf(t, center, sd)
        return float(left + right)

    return [
        float(brentq(slope, -center - sd, -center + sd)),
        float(brentq(slope, center - sd, center + sd)),
    ]


def sinc_product_tail(a: float, b: float, R: float, half_width: float) -> float:  # noqa: N803
    """Integral of K_R(x - a) K_R(x - b) over |x| > half_width, slowly decaying part only.

    sin(R(x - a)) sin(R(x - b)) = (cos(R(a - b)) - cos(R(2x - a - b))) / 2; the second
    half integrates to O(1 / (R L^2)) and is left out.
    """
    L = half_width  # noqa: N806
    if a == b:
        outer = 1.0 / (L - a) + 1.0 / (L + a)
    else:
        outer = (math.log((L - b) / (L - a)) + math.log((L + a) / (L + b))) / (a - b)
    return 0.5 * math.cos(R * (a - b)) * outer
