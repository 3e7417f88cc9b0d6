"""Closed-form mixed moments of the weighted sums R and S."""

from . import general, uniform, large_n, moment_set
from .general import moment_S, moment_RS, moment_R2S
from .uniform import (
    moment_S_uniform,
    moment_RS_uniform,
    moment_R2S_uniform,
    uniform_S_coefficients,
    uniform_RS_coefficients,
    uniform_R2S_coefficients,
    coefficient_identity_check,
)
from .large_n import moments_large_N
from .moment_set import MomentSet, compute_moment_set

__all__ = [
    "general", "uniform", "large_n", "moment_set",
    "moment_S", "moment_RS", "moment_R2S",
    "moment_S_uniform", "moment_RS_uniform", "moment_R2S_uniform",
    "uniform_S_coefficients", "uniform_RS_coefficients", "uniform_R2S_coefficients",
    "coefficient_identity_check", "moments_large_N",
    "MomentSet", "compute_moment_set",
]
