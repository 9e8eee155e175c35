from __future__ import annotations

from sincsmooth.regression.estimator import (
    RegressionEvaluation,
    SmoothingMatrixSummary,
    regress_at,
    regress_ci,
    regress_curve,
    sigma2_hat,
    smoother_weights,
    smoothing_summary,
)

__all__ = [
    "RegressionEvaluation",
    "SmoothingMatrixSummary",
    "regress_at",
    "regress_ci",
    "regress_curve",
    "sigma2_hat",
    "smoother_weights",
    "smoothing_summary",
]
