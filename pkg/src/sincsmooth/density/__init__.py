from __future__ import annotations

from sincsmooth.density.band import BandEstimate, BootstrapPlan, bootstrap_band, sup_deviation
from sincsmooth.density.estimator import (
    DensityEvaluation,
    density_at,
    density_derivative_at,
    density_grid,
    density_partials,
)
from sincsmooth.density.intervals import pointwise_ci, variance_limit_check
from sincsmooth.density.radius import lscv_score, select_radius, select_radius_lscv

__all__ = [
    "BandEstimate",
    "BootstrapPlan",
    "DensityEvaluation",
    "bootstrap_band",
    "density_at",
    "density_derivative_at",
    "density_grid",
    "density_partials",
    "lscv_score",
    "pointwise_ci",
    "select_radius",
    "select_radius_lscv",
    "sup_deviation",
    "variance_limit_check",
]
