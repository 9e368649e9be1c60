from .constants import (
    ConstantEstimates,
    cluster_delta,
    cluster_tau,
    delta_series,
    estimate_constants,
    solve_minimizer,
)
from .bounds import theorem1_coefficients, theorem1_curve, theorem1_rhs, theorem2_rhs
from .fit import RateFit, fit_linear_rate, positive_prefix
from .report import BoundReport, BoundRow, HeterogeneitySummary, check_trace_against_bound

__all__ = [
    "ConstantEstimates",
    "cluster_delta",
    "cluster_tau",
    "delta_series",
    "estimate_constants",
    "solve_minimizer",
    "theorem1_coefficients",
    "theorem1_curve",
    "theorem1_rhs",
    "theorem2_rhs",
    "RateFit",
    "fit_linear_rate",
    "positive_prefix",
    "BoundReport",
    "BoundRow",
    "HeterogeneitySummary",
    "check_trace_against_bound",
]
