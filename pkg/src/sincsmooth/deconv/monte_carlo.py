from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from sincsmooth.core.numerics import canonical_sum
from sincsmooth.core.rng import stream
from sincsmooth.core.types import SampleMatrix, check_radius
from sincsmooth.deconv.estimator import DeconvEvaluation
from sincsmooth.errors import DomainError, IllPosedError

_LOG_FLOAT_MAX = math.log(np.finfo(np.float64).max)


def _check_setup(sample: SampleMatrix, h: float, R: float, m: int) -> float:  # noqa: N803
    if sample.d != 1:
        raise DomainError("Monte-Carlo deconvolution is one-dimensional")
    if h < 0.0 or not math.isfinite(h):
        raise DomainError("noise scale h must be finite and non-negative")
    if m < 1:
        raise DomainError("need at least one uniform draw per observation")
    radius = check_radius(R)
    if 0.5 * (h * radius) ** 2 >= _LOG_FLOAT_MAX:
        raise IllPosedError("exp(u^2 h^2 / 2) overflows on (0, R)", frequency=radius)
    return radius


def _draws(n: int, m: int, R: float, seed: int) -> NDArray[np.float64]:  # noqa: N803
    return stream(seed).uniform(0.0, R, size=(n, m))


def _summarize(theta: float, terms: NDArray[np.float64]) -> DeconvEvaluation:
    count = terms.size
    error = float(np.std(terms, ddof=1)) / math.sqrt(count) if count > 1 else 0.0
    return DeconvEvaluation(
        theta=(float(theta),), raw_value=canonical_sum(terms) / count, mc_std_error=error
    )


def _terms(
    x: NDArray[np.float64],
    theta: float,
    u: NDArray[np.float64],
    h: float,
    R: float,  # noqa: N803
    derivative: bool,
) -> NDArray[np.float64]:
    phase = u * (theta - x[:, None])
    amplitude = (R / math.pi) * np.exp(0.5 * (u * h) ** 2)
    if derivative:
        return (-amplitude * u * np.sin(phase)).ravel()
    return (amplitude * np.cos(phase)).ravel()


def _evaluate(
    sample: SampleMatrix,
    thetas: ArrayLike,
    h: float,
    R: float,  # noqa: N803
    m: int,
    seed: int,
    derivative: bool,
) -> list[DeconvEvaluation]:
    radius = _check_setup(sample, h, R, m)
    x = sample.data[:, 0]
    u = _draws(sample.n, m, radius, seed)
    return [
        _summarize(theta, _terms(x, float(theta), u, h, radius, derivative))
        for theta in np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    ]


def deconv_at_mc(
    sample: SampleMatrix,
    theta: float,
    h: float,
    R: float,  # noqa: N803
    m: int = 1,
    seed: int = 0,
) -> DeconvEvaluation:
    """Randomized deconvolution under N(0, h^2) noise, d = 1.

    Each observation gets m frequencies u ~ U(0, R); every draw contributes
    (R / pi) exp(u^2 h^2 / 2) cos(u (theta - x)), an unbiased estimate of the
    quadrature estimator given the data. m = 1 is the one-draw-per-datum scheme.
    """
    return _evaluate(sample, [theta], h, R, m, seed, derivative=False)[0]


def deconv_grid_mc(
    sample: SampleMatrix, thetas: ArrayLike, h: float, R: float, m: int = 1, seed: int = 0  # noqa: N803
) -> list[DeconvEvaluation]:
    """`deconv_at_mc` on a theta grid with the same frequency draws at every theta."""
    return _evaluate(sample, thetas, h, R, m, seed, derivative=False)


def deconv_derivative_mc(
    sample: SampleMatrix, thetas: ArrayLike, h: float, R: float, m: int = 1, seed: int = 0  # noqa: N803
) -> list[DeconvEvaluation]:
    """First derivative in theta: -(R / pi) u exp(u^2 h^2 / 2) sin(u (theta - x)) per draw."""
    return _evaluate(sample, thetas, h, R, m, seed, derivative=True)
