from __future__ import annotations

from sincsmooth.deconv.estimator import (
    DeconvEvaluation,
    deconv_at,
    deconv_derivative_at,
    deconv_grid,
    deconv_partials,
)
from sincsmooth.deconv.monte_carlo import deconv_at_mc, deconv_derivative_mc, deconv_grid_mc
from sincsmooth.deconv.noise import NoiseModel

__all__ = [
    "DeconvEvaluation",
    "NoiseModel",
    "deconv_at",
    "deconv_at_mc",
    "deconv_derivative_at",
    "deconv_derivative_mc",
    "deconv_grid",
    "deconv_grid_mc",
    "deconv_partials",
]
