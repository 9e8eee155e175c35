"""Fourier deconvolution estimator of a mixing density and its derivatives.

g(theta) = 1/(n (2 pi)^d) sum_i int_[-R,R]^d cos(s . (theta - X_i)) / ft(s) ds

For separable noise the integral factorizes into one-dimensional integrals per axis,
each evaluated by Gauss-Legendre quadrature on [0, R] (the integrands are even in s).
Non-separable noise uses a tensor rule for d <= 2 and scrambled Sobol points above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy.stats import qmc

from sincsmooth.core.kernel import product_terms
from sincsmooth.core.numerics import canonical_sum, canonical_sum_rows, gauss_legendre, parallel_map
from sincsmooth.core.types import DerivativeTensor, EstimatorConfig, SampleMatrix, as_point, as_points
from sincsmooth.deconv.noise import NoiseModel, inverse_transform
from sincsmooth.errors import DomainError

_NODE_PADDING = 32
_ROW_BLOCK = 2_000_000


@dataclass(frozen=True, slots=True)
class DeconvEvaluation:
    theta: tuple[float, ...]
    raw_value: float
    mc_std_error: float | None = None


def node_count(R: float, spread: float, nodes_per_radius: int) -> int:  # noqa: N803
    """Gauss-Legendre nodes for int_0^R of an integrand oscillating like cos(s * spread)."""
    return max(math.ceil(nodes_per_radius * R), math.ceil(R * spread) + _NODE_PADDING)


def _axis_integrals(
    offsets: NDArray[np.float64],
    nodes: NDArray[np.float64],
    weights: NDArray[np.float64],
    max_order: int,
) -> list[NDArray[np.float64]]:
    """[I, I', I''] / (2 pi) for I(a) = int_-R^R cos(s a) / ft(s) ds at every offset a.

    `weights` already carry the 1/ft factor of the half-range rule on [0, R].
    """
    out = [np.empty(offsets.shape[0]) for _ in range(max_order + 1)]
    block = max(1, _ROW_BLOCK // nodes.shape[0])
    for start in range(0, offsets.shape[0], block):
        rows = slice(start, start + block)
        phase = np.outer(offsets[rows], nodes)
        cosine = np.cos(phase)
        out[0][rows] = 2.0 * (cosine @ weights)
        if max_order >= 1:
            out[1][rows] = -2.0 * (np.sin(phase) @ (weights * nodes))
        if max_order >= 2:
            out[2][rows] = -2.0 * (cosine @ (weights * nodes**2))
    return [integral / (2.0 * math.pi) for integral in out]


def _separable_factors(
    offsets: NDArray[np.float64], noise: NoiseModel, cfg: EstimatorConfig, max_order: int
) -> list[NDArray[np.float64]]:
    R = cfg.R
    d = offsets.shape[1]
    spread = float(np.max(np.abs(offsets)))
    nodes, weights = gauss_legendre(0.0, R, node_count(R, spread, cfg.quad_nodes_per_radius))
    checked = np.append(nodes, R)
    inverse = inverse_transform(
        noise.axis_ft(checked), checked, power=d, max_inverse=cfg.max_inverse_ft
    )[:-1]
    factors = [np.empty_like(offsets) for _ in range(max_order + 1)]
    for axis in range(d):
        for order, values in enumerate(
            _axis_integrals(offsets[:, axis], nodes, weights * inverse, max_order)
        ):
            factors[order][:, axis] = values
    return factors


def _joint_rule(
    d: int, spread: float, cfg: EstimatorConfig
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    R = cfg.R
    if d <= 2:
        count = 2 * node_count(R, spread, cfg.quad_nodes_per_radius)
        nodes, weights = gauss_legendre(-R, R, count)
        mesh = np.meshgrid(*([nodes] * d), indexing="ij")
        wmesh = np.meshgrid(*([weights] * d), indexing="ij")
        frequencies = np.stack([component.ravel() for component in mesh], axis=1)
        return frequencies, np.prod(np.stack([w.ravel() for w in wmesh], axis=1), axis=1)
    logger.warning(
        "Non-separable noise in d={}: falling back to {} scrambled Sobol points", d, cfg.qmc_points
    )
    sobol = qmc.Sobol(d=d, scramble=True, seed=cfg.seed)
    unit = sobol.random_base2(m=int(math.log2(cfg.qmc_points)))
    frequencies = R * (2.0 * unit - 1.0)
    return frequencies, np.full(frequencies.shape[0], (2.0 * R) ** d / frequencies.shape[0])


def _joint_terms(
    offsets: NDArray[np.float64], noise: NoiseModel, cfg: EstimatorConfig, max_order: int
) -> list[NDArray[np.float64]]:
    n, d = offsets.shape
    frequencies, weights = _joint_rule(d, float(np.max(np.abs(offsets))), cfg)
    inverse = inverse_transform(
        noise.joint_ft(frequencies), frequencies, power=1, max_inverse=cfg.max_inverse_ft
    )
    scaled = weights * inverse / (2.0 * math.pi) ** d
    value = np.empty(n)
    grad = np.empty((n, d))
    hess = np.empty((n, d, d))
    block = max(1, _ROW_BLOCK // frequencies.shape[0])
    for start in range(0, n, block):
        rows = slice(start, start + block)
        phase = offsets[rows] @ frequencies.T
        cosine = np.cos(phase)
        value[rows] = cosine @ scaled
        if max_order >= 1:
            sine = np.sin(phase)
            for j in range(d):
                grad[rows, j] = -(sine @ (scaled * frequencies[:, j]))
        if max_order >= 2:
            for j in range(d):
                for k in range(j, d):
                    hess[rows, j, k] = -(cosine @ (scaled * frequencies[:, j] * frequencies[:, k]))
                    hess[rows, k, j] = hess[rows, j, k]
    return [value, grad, hess][: max_order + 1]


def _per_sample_terms(
    sample: SampleMatrix,
    theta: NDArray[np.float64],
    noise: NoiseModel,
    cfg: EstimatorConfig,
    max_order: int,
) -> list[NDArray[np.float64]]:
    cfg.check_dimension(sample.d)
    noise.check_dimension(sample.d)
    offsets = theta - sample.data
    if noise.separable:
        factors = _separable_factors(offsets, noise, cfg, max_order)
        return [product_terms(factors, order) for order in range(max_order + 1)]
    noise.check_origin(sample.d)
    return _joint_terms(offsets, noise, cfg, max_order)


def deconv_partials(
    sample: SampleMatrix, theta: ArrayLike, noise: NoiseModel, cfg: EstimatorConfig
) -> tuple[float, NDArray[np.float64], NDArray[np.float64]]:
    point = as_point(theta, sample.d)
    value_terms, grad_terms, hess_terms = _per_sample_terms(sample, point, noise, cfg, 2)
    n = sample.n
    return (
        canonical_sum(value_terms) / n,
        canonical_sum_rows(grad_terms.T) / n,
        canonical_sum_rows(np.moveaxis(hess_terms, 0, -1)) / n,
    )


def deconv_at(
    sample: SampleMatrix, theta: ArrayLike, noise: NoiseModel, cfg: EstimatorConfig
) -> DeconvEvaluation:
    point = as_point(theta, sample.d)
    (terms,) = _per_sample_terms(sample, point, noise, cfg, 0)
    return DeconvEvaluation(
        theta=tuple(float(v) for v in point), raw_value=canonical_sum(terms) / sample.n
    )


def deconv_grid(
    sample: SampleMatrix, thetas: ArrayLike, noise: NoiseModel, cfg: EstimatorConfig
) -> list[DeconvEvaluation]:
    points = as_points(thetas, sample.d)
    return parallel_map(lambda theta: deconv_at(sample, theta, noise, cfg), list(points), cfg.threads)


def deconv_derivative_at(
    sample: SampleMatrix,
    theta: ArrayLike,
    noise: NoiseModel,
    cfg: EstimatorConfig,
    order: int,
) -> DerivativeTensor:
    if order not in (1, 2):
        raise DomainError(f"deconvolution derivative order must be 1 or 2, got {order}")
    point = as_point(theta, sample.d)
    terms = _per_sample_terms(sample, point, noise, cfg, order)[order]
    entries = canonical_sum_rows(np.moveaxis(terms, 0, -1)) / sample.n
    return DerivativeTensor(order=order, entries=entries)
