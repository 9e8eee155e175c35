from __future__ import annotations

from sincsmooth.core.kernel import (
    fourier_integral,
    kernel_factors,
    product_kernel,
    product_terms,
    sinc_kernel,
    sinc_kernel_deriv,
)
from sincsmooth.core.numerics import canonical_sum, parallel_map
from sincsmooth.core.rng import stream
from sincsmooth.core.types import (
    ClipMode,
    DerivativeTensor,
    EstimatorConfig,
    GridAxis,
    IntervalEstimate,
    LabeledSample,
    MarkovSeries,
    OrdinarySmooth,
    SampleMatrix,
    Supersmooth,
    build_grid,
)

__all__ = [
    "ClipMode",
    "DerivativeTensor",
    "EstimatorConfig",
    "GridAxis",
    "IntervalEstimate",
    "LabeledSample",
    "MarkovSeries",
    "OrdinarySmooth",
    "SampleMatrix",
    "Supersmooth",
    "build_grid",
    "canonical_sum",
    "fourier_integral",
    "kernel_factors",
    "parallel_map",
    "product_kernel",
    "product_terms",
    "sinc_kernel",
    "sinc_kernel_deriv",
    "stream",
]
