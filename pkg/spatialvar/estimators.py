"""
Truncated-series variance estimators for the spatial mean f = R/S.

Every estimator returns a ``VarianceEstimate`` tagged with the formula
that produced it. Truncated series are not true variances: for small N
or small alpha they can dip below zero. The value is returned as is,
``VarianceEstimate.negative`` flags it and a RuntimeWarning is issued.

Functions
---------
variance_second_order(ms)                       general weights, second order
variance_uniform_second_order(n, rm, agg)       equal weights, all printed orders
variance_large_N(rm, w, f)                      numerator variance inflated by 1/alpha^2
variance_large_n_uniform(n, rm, agg)            the same from aggregates
variance_alpha_one(w, f)                        beta^T Sigma beta
variance_alpha_near_one(n, rm, agg)             leading term of each series
variance_single_epoch(rm, ef)                   one snapshot, moderate N
variance_single_epoch_large_n(rm, ef)           one snapshot, large N
correction_terms(n, rm)                         1/N and 1/N^2 bracket terms
correction_profile(n, rm)                       every printed bracket term
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import DomainError
from .fields import EpochField, FieldAggregates, FieldStats, ReportingModel, WeightVector
from .moments import MomentSet, moment_R2S, moment_RS
from .moments.general import _check_dimensions
from .moments.large_n import mean_R, mean_R2
from .utils import summation

__all__ = [
    "VarianceMethod",
    "VarianceEstimate",
    "variance_second_order",
    "variance_uniform_second_order",
    "variance_large_N",
    "variance_large_n_uniform",
    "variance_alpha_one",
    "variance_alpha_near_one",
    "variance_single_epoch",
    "variance_single_epoch_large_n",
    "correction_terms",
    "correction_profile",
]


class VarianceMethod(str, enum.Enum):
    SECOND_ORDER = "second-order"
    UNIFORM_SECOND_ORDER = "uniform-second-order"
    LARGE_N = "large-n"
    ALPHA_ONE = "alpha-one"
    ALPHA_NEAR_ONE = "alpha-near-one"
    EPOCH = "epoch"
    EPOCH_LARGE_N = "epoch-large-n"


@dataclass(frozen=True)
class VarianceEstimate:
    """
    An estimated variance of the spatial mean.

    Attributes
    ----------
    value : float
        Estimated variance, in field units squared
    method : VarianceMethod
        Formula that produced it
    correction_profile : Optional[tuple]
        Per-bracket correction terms, ordered by power of 1/N
        (uniform second order only)
    """
    value: float
    method: VarianceMethod
    correction_profile: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self) -> None:
        if self.value < 0.0:
            warnings.warn(
                f"{self.method.value} variance is negative ({self.value!r}); "
                "N or alpha is too small for the truncated series",
                RuntimeWarning,
                stacklevel=3,
            )

    @property
    def negative(self) -> bool:
        return self.value < 0.0

    def as_row(self) -> Dict[str, object]:
        return {"method": self.method.value, "value": self.value, "negative": self.negative}


def _require_pairs(n: int, what: str) -> None:
    if n < 2:
        raise DomainError(f"{what} needs N >= 2 (off-diagonal sums), got N={n}", "single-site")


def _require_sites(n: int, agg: FieldAggregates) -> None:
    if agg.n != n:
        raise DomainError(f"aggregates describe {agg.n} sites, not {n}", "dimension-mismatch")


# ── General weights ────────────────────────────────────────────────
def variance_second_order(ms: MomentSet) -> VarianceEstimate:
    """
    Variance of the second-order Taylor truncation of R/S.

    The terms are kept in their published grouping and summed with
    compensation; denominators are powers of E S = alpha, numerators
    use the raw moments E S^2, E S^3, E S^4.
    """
    es = ms.es1
    er, er2 = ms.ers0, ms.er2s0
    ers, ers2 = ms.ers1, ms.ers2
    er2s, er2s2 = ms.er2s1, ms.er2s2
    s2, s3, s4 = ms.es2, ms.es3, ms.es4

    terms = [
        -6.0 * er ** 2 / es ** 2,
        4.0 * er2 / es ** 2,
        10.0 * er ** 2 / es ** 4 * s2,
        -(ers ** 2) / es ** 4,
        -(er ** 2) / es ** 6 * s2 ** 2,
        2.0 * er / es ** 4 * ers2,
        -4.0 / es ** 3 * er2s,
        -6.0 * er ** 2 / es ** 5 * s3,
        er ** 2 / es ** 6 * s4,
        1.0 / es ** 4 * er2s2,
        2.0 * er * ers / es ** 3 * (s2 / es ** 2 - 1.0),
    ]
    return VarianceEstimate(math.fsum(terms), VarianceMethod.SECOND_ORDER)


def variance_large_N(rm: ReportingModel, w: WeightVector, f: FieldStats) -> VarianceEstimate:
    """sigma_R^2 / alpha^2 with sigma_R^2 = E R^2 - (E R)^2."""
    _check_dimensions(w, f)
    er = moment_RS(0, w, rm, f)
    er2 = moment_R2S(0, w, rm, f)
    value = math.fsum([er2, -er * er]) / rm.alpha ** 2
    return VarianceEstimate(value, VarianceMethod.LARGE_N)


def variance_alpha_one(w: WeightVector, f: FieldStats) -> VarianceEstimate:
    """Quadratic form beta^T Sigma beta of the weights against the covariance."""
    _check_dimensions(w, f)
    value = summation.total(np.outer(w.beta, w.beta) * f.covariance)
    return VarianceEstimate(value, VarianceMethod.ALPHA_ONE)


# ── Equal weights ──────────────────────────────────────────────────
def correction_profile(n: int, rm: ReportingModel) -> Tuple[Tuple[float, ...], ...]:
    """
    Correction terms of the three brackets of the equal-weight formula.

    With u = (alpha-1)/alpha and e = 1/N:

    * bracket on sum E r_i^2:        (e u, e^2 u (2 alpha - 1)/alpha)
    * bracket on sum E r_i r_j:      (3 e u, e^2 u (6 alpha - 4)/alpha)
    * bracket on (sum E r_i / N)^2:  (2 e u, -3 e^2 u^2, e^3 (6 u^2 + u/alpha^2))

    The third bracket's 1/N^2 term is the one that reproduces the
    general second-order formula evaluated with equal-weight moments.
    """
    if n < 1:
        raise DomainError(f"need at least one site, got N={n}", "empty-input")
    a = rm.alpha
    u = (a - 1.0) / a
    e = 1.0 / n
    return (
        (e * u, e * e * u * (2.0 * a - 1.0) / a),
        (3.0 * e * u, e * e * u * (6.0 * a - 4.0) / a),
        (2.0 * e * u, -3.0 * e * e * u * u, e ** 3 * (6.0 * u * u + u / a ** 2)),
    )


def correction_terms(n: int, rm: ReportingModel) -> Tuple[Tuple[float, float], ...]:
    """Order 1/N and 1/N^2 terms of each bracket."""
    return tuple(bracket[:2] for bracket in correction_profile(n, rm))


def variance_uniform_second_order(n: int, rm: ReportingModel,
                                  agg: FieldAggregates) -> VarianceEstimate:
    """
    Second-order variance for equal weights, as three bracketed series
    in 1/N against sum E r_i^2, sum_{i != j} E r_i r_j and
    (sum E r_i / N)^2.

    Raises
    ------
    DomainError
        For N = 1
    """
    _require_pairs(n, "the equal-weight second-order variance")
    _require_sites(n, agg)
    a = rm.alpha
    profile = correction_profile(n, rm)
    k_sq = math.fsum((1.0,) + profile[0])
    k_cross = math.fsum((1.0,) + profile[1])
    k_mean = math.fsum((1.0,) + profile[2])
    n2 = float(n) ** 2
    mean = agg.sum_mu / n
    value = math.fsum([
        k_sq * agg.sum_sq / (a * n2),
        k_cross * agg.sum_cross / n2,
        -k_mean * mean * mean,
    ])
    return VarianceEstimate(value, VarianceMethod.UNIFORM_SECOND_ORDER, profile)


def variance_large_n_uniform(n: int, rm: ReportingModel, agg: FieldAggregates) -> VarianceEstimate:
    """Large-N variance for equal weights, needing only the aggregates."""
    _require_sites(n, agg)
    er = mean_R(rm, agg)
    value = math.fsum([mean_R2(rm, agg), -er * er]) / rm.alpha ** 2
    return VarianceEstimate(value, VarianceMethod.LARGE_N)


def variance_alpha_near_one(n: int, rm: ReportingModel, agg: FieldAggregates) -> VarianceEstimate:
    """
    Leading term of every bracket, rewritten with point variances
    sigma_i^2 and pair covariances sigma_ij:

        (1/alpha) sum sigma_i^2 / N^2 + sum_{i != j} sigma_ij / N^2
        + ((1 - alpha)/alpha) sum (E r_i)^2 / N^2
    """
    _require_pairs(n, "the alpha-near-one variance")
    _require_sites(n, agg)
    a = rm.alpha
    n2 = float(n) ** 2
    point = math.fsum([agg.sum_sq, -agg.sum_mu_sq])
    pairs = math.fsum([agg.sum_cross, -agg.sum_mu_outer])
    value = math.fsum([
        point / (a * n2),
        pairs / n2,
        (1.0 - a) / a * agg.sum_mu_sq / n2,
    ])
    return VarianceEstimate(value, VarianceMethod.ALPHA_NEAR_ONE)


# ── Single epoch ───────────────────────────────────────────────────
def variance_single_epoch(rm: ReportingModel, ef: EpochField) -> VarianceEstimate:
    """
    Equal-weight variance of one snapshot, with the finite-N brackets.

    value = ((1-alpha)/alpha) [ P(1/N) sum r_i^2 / N^2
                                - Q(1/N) sum_{j != i} r_i r_j / N^3 ]

    where P and Q are cubic and quadratic polynomials in 1/N.
    """
    _require_pairs(ef.n, "the single-epoch variance")
    a = rm.alpha
    e = 1.0 / ef.n
    agg = FieldAggregates.from_epoch(ef)
    quartic = (6.0 * a * a - 6.0 * a + 1.0) / (a * a)
    p = math.fsum([
        1.0,
        e * (2.0 * a - 1.0) / a,
        -e * e * (a * a + a - 1.0) / (a * a),
        e ** 3 * quartic,
    ])
    q = math.fsum([1.0, e * (7.0 * a - 5.0) / a, -e * e * quartic])
    value = (1.0 - a) / a * math.fsum([e * e * p * agg.sum_sq, -e ** 3 * q * agg.sum_cross])
    return VarianceEstimate(value, VarianceMethod.EPOCH)


def variance_single_epoch_large_n(rm: ReportingModel, ef: EpochField) -> VarianceEstimate:
    """((1-alpha)/alpha) sigma_s^2 / N with the divide-by-N spatial variance."""
    a = rm.alpha
    value = (1.0 - a) / a * summation.population_variance(ef.values) / ef.n
    return VarianceEstimate(value, VarianceMethod.EPOCH_LARGE_N)
