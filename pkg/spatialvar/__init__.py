"""
spatialvar: variance of spatial means under random missing reports.

A spatial mean f = sum beta_i s_i r_i / sum beta_i s_i averages site
values r_i over the sites that happen to report (s_i ~ Bernoulli(alpha)).
This package evaluates closed-form mixed moments of the numerator and
denominator, truncated-series variance estimators built from them,
convergence diagnostics for the series, and Monte-Carlo and exhaustive
enumeration oracles to check all of it.

Example Usage
-------------
>>> from spatialvar import EpochField, ReportingModel, WeightVector
>>> from spatialvar import variance_single_epoch_large_n, simulate_epoch_ensemble
>>>
>>> ef = EpochField([1.0, 3.0, 2.0, 5.0, 4.0, 6.0])
>>> rm = ReportingModel(0.8)
>>> variance_single_epoch_large_n(rm, ef).value
>>> simulate_epoch_ensemble(ef, WeightVector.uniform(6), rm, 10_000, seed=7)
"""

__version__ = "1.0.0"
__author__ = "spatialvar contributors"
__license__ = "MIT"

from .errors import SpatialVarError, InputError, DomainError
from .fields import WeightVector, ReportingModel, FieldStats, FieldAggregates, EpochField
from .combinatorics import StirlingTable, stirling2, falling_factorial
from .moments import (
    MomentSet,
    compute_moment_set,
    moment_S,
    moment_RS,
    moment_R2S,
    moment_S_uniform,
    moment_RS_uniform,
    moment_R2S_uniform,
    moments_large_N,
    coefficient_identity_check,
)
from .estimators import (
    VarianceEstimate,
    VarianceMethod,
    variance_second_order,
    variance_uniform_second_order,
    variance_large_N,
    variance_large_n_uniform,
    variance_alpha_one,
    variance_alpha_near_one,
    variance_single_epoch,
    variance_single_epoch_large_n,
    correction_terms,
    correction_profile,
)
from .convergence import (
    ConvergenceReport,
    ratio_condition,
    hoeffding_bound,
    sd_distance,
    convergence_report,
)
from .montecarlo import (
    EnsembleResult,
    MaskEnsemble,
    SweepGrid,
    simulate_epoch_ensemble,
    exact_enumeration_epoch,
    exact_enumeration_field,
    exact_moment_enumeration,
    relative_error_sweep,
)

__all__ = [
    "__version__",
    "SpatialVarError", "InputError", "DomainError",
    "WeightVector", "ReportingModel", "FieldStats", "FieldAggregates", "EpochField",
    "StirlingTable", "stirling2", "falling_factorial",
    "MomentSet", "compute_moment_set",
    "moment_S", "moment_RS", "moment_R2S",
    "moment_S_uniform", "moment_RS_uniform", "moment_R2S_uniform",
    "moments_large_N", "coefficient_identity_check",
    "VarianceEstimate", "VarianceMethod",
    "variance_second_order", "variance_uniform_second_order",
    "variance_large_N", "variance_large_n_uniform",
    "variance_alpha_one", "variance_alpha_near_one",
    "variance_single_epoch", "variance_single_epoch_large_n",
    "correction_terms", "correction_profile",
    "ConvergenceReport", "ratio_condition", "hoeffding_bound", "sd_distance",
    "convergence_report",
    "EnsembleResult", "MaskEnsemble", "SweepGrid",
    "simulate_epoch_ensemble", "exact_enumeration_epoch", "exact_enumeration_field",
    "exact_moment_enumeration", "relative_error_sweep",
]
