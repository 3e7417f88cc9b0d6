"""
Core data model: averaging weights, the reporting model, and the field
descriptions the estimators consume.

Classes
-------
WeightVector
    Per-site averaging weights beta_i, normalized to sum 1
ReportingModel
    Probability alpha that any single site reports
FieldStats
    First moments E r_i and raw second moments E r_i r_j of a random field
FieldAggregates
    The handful of field sums the uniform-weight formulas need
EpochField
    One snapshot of site values r_i (expectations degenerate to values)

Example
-------
>>> import numpy as np
>>> from spatialvar import WeightVector, ReportingModel, FieldStats
>>> w = WeightVector.uniform(3)
>>> rm = ReportingModel(0.8)
>>> f = FieldStats.from_covariance(np.zeros(3), np.eye(3))
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InputError
from .utils import summation

__all__ = [
    "WeightVector",
    "ReportingModel",
    "FieldStats",
    "FieldAggregates",
    "EpochField",
]


# ── Constants ──────────────────────────────────────────────────────
RENORMALIZE_TOLERANCE = 1e-6       # |sum beta - 1| accepted and rescaled
UNIFORM_TOLERANCE     = 1e-12      # all beta_i within this of 1/N => uniform
SYMMETRY_TOLERANCE    = 1e-12      # relative asymmetry allowed in FieldStats
PSD_TOLERANCE         = 1e-9       # eigenvalue floor relative to max second-moment diagonal
DIAGONAL_TOLERANCE    = 1e-12      # second_ii >= mu_i^2 - tol


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _as_vector(values, name: str) -> np.ndarray:
    vector = np.array(values, dtype=np.float64, copy=True)
    if vector.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {vector.shape}",
                         "dimension-mismatch")
    if vector.size == 0:
        raise InputError(f"{name} is empty", "empty-input")
    if not np.all(np.isfinite(vector)):
        raise InputError(f"{name} contains non-finite values", "non-finite-value")
    return vector


# ── Weights ────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class WeightVector:
    """
    Averaging weights beta_i of the spatial mean.

    Inputs whose sum is within 1e-6 of one are rescaled to sum exactly
    one; anything further off is rejected. Zero weights are allowed and
    still count towards N.

    Parameters
    ----------
    beta : array_like
        Non-negative weights, one per site

    Raises
    ------
    InputError
        On negative, non-finite or non-normalizable weights
    """
    beta: np.ndarray

    def __post_init__(self) -> None:
        beta = _as_vector(self.beta, "weights")
        if np.any(beta < 0.0):
            raise InputError("weights must be non-negative", "negative-weight")
        s = summation.total(beta)
        if abs(s - 1.0) > RENORMALIZE_TOLERANCE:
            raise InputError(f"weights sum to {s!r}, not 1", "weights-not-normalized")
        object.__setattr__(self, "beta", _readonly(beta / s))

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        """Equal weights 1/N over ``n`` sites."""
        if n < 1:
            raise InputError(f"need at least one site, got {n}", "empty-input")
        return cls(np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return int(self.beta.size)

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(np.abs(self.beta - 1.0 / self.n) <= UNIFORM_TOLERANCE))

    def power_sum(self, k: int) -> float:
        """sum_i beta_i^k."""
        return summation.total(self.beta ** k)


# ── Reporting ──────────────────────────────────────────────────────
@dataclass(frozen=True)
class ReportingModel:
    """Independent reporting with probability ``alpha`` in (0, 1]."""
    alpha: float

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        if not (math.isfinite(alpha) and 0.0 < alpha <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha!r}",
                              "alpha-out-of-range")
        object.__setattr__(self, "alpha", alpha)


# ── Random field ───────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class FieldStats:
    """
    Raw first and second moments of the site values.

    Attributes
    ----------
    mu : np.ndarray
        E r_i, length N
    second : np.ndarray
        E r_i r_j, symmetric N x N
    strict : bool
        When False, an indefinite implied covariance (or a diagonal
        below mu_i^2) is reported with a RuntimeWarning instead of an
        InputError. Ingestion of empirical estimates uses this.
    """
    mu: np.ndarray
    second: np.ndarray
    strict: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        mu = _as_vector(self.mu, "mu")
        second = np.array(self.second, dtype=np.float64, copy=True)
        n = mu.size
        if second.shape != (n, n):
            raise InputError(
                f"second-moment matrix has shape {second.shape}, expected {(n, n)}",
                "dimension-mismatch",
            )
        if not np.all(np.isfinite(second)):
            raise InputError("second-moment matrix contains non-finite values",
                             "non-finite-value")

        scale = float(np.max(np.abs(second))) or 1.0
        skew = float(np.max(np.abs(second - second.T)))
        if skew > SYMMETRY_TOLERANCE * scale:
            raise InputError(f"second-moment matrix is not symmetric (max skew {skew:.3g})",
                             "asymmetric-matrix")
        second = 0.5 * (second + second.T)

        problems = []
        diag = np.diagonal(second)
        if np.any(diag < mu ** 2 - DIAGONAL_TOLERANCE * max(1.0, scale)):
            problems.append("a diagonal entry is below mu_i^2")
        cov = second - np.outer(mu, mu)
        # cov inherits the rounding of second, which dwarfs cov when |mu|^2 >> sigma^2
        floor = -PSD_TOLERANCE * max(float(np.max(np.abs(diag))),
                                     float(np.max(np.abs(np.diagonal(cov)))), 1e-300)
        lowest = float(np.linalg.eigvalsh(cov)[0])
        if lowest < floor:
            problems.append(f"implied covariance is indefinite (lowest eigenvalue {lowest:.3g})")
        if problems:
            message = "; ".join(problems)
            if self.strict:
                raise InputError(message, "indefinite-covariance")
            warnings.warn(message, RuntimeWarning, stacklevel=3)

        object.__setattr__(self, "mu", _readonly(mu))
        object.__setattr__(self, "second", _readonly(second))

    @classmethod
    def from_covariance(cls, mu, cov, strict: bool = True) -> "FieldStats":
        """Build from means and a covariance matrix sigma_ij."""
        mu = np.asarray(mu, dtype=np.float64)
        return cls(mu, np.asarray(cov, dtype=np.float64) + np.outer(mu, mu), strict=strict)

    @classmethod
    def from_epoch(cls, ef: "EpochField") -> "FieldStats":
        """Degenerate moments of a single snapshot: E r_i = r_i, E r_i r_j = r_i r_j."""
        return cls(ef.values, np.outer(ef.values, ef.values))

    @property
    def n(self) -> int:
        return int(self.mu.size)

    @property
    def covariance(self) -> np.ndarray:
        return self.second - np.outer(self.mu, self.mu)


@dataclass(frozen=True)
class FieldAggregates:
    """
    Field sums consumed by the uniform-weight formulas.

    Attributes
    ----------
    n : int
        Site count N
    sum_mu : float
        sum_i E r_i
    sum_mu_outer : float
        sum_{i != j} E r_i E r_j
    sum_sq : float
        sum_i E r_i^2
    sum_cross : float
        sum_{i != j} E r_i r_j
    sum_mu_sq : float
        sum_i (E r_i)^2
    """
    n: int
    sum_mu: float
    sum_mu_outer: float
    sum_sq: float
    sum_cross: float
    sum_mu_sq: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"need at least one site, got {self.n}", "empty-input")

    @classmethod
    def from_field_stats(cls, f: FieldStats) -> "FieldAggregates":
        ones = np.ones(f.n)
        sum_mu_sq = summation.dot(f.mu, f.mu)
        return cls(
            n=f.n,
            sum_mu=summation.total(f.mu),
            sum_mu_outer=summation.offdiagonal_form(f.mu, f.mu, np.ones((f.n, f.n))),
            sum_sq=summation.total(np.diagonal(f.second)),
            sum_cross=summation.offdiagonal_form(ones, ones, f.second),
            sum_mu_sq=sum_mu_sq,
        )

    @classmethod
    def from_epoch(cls, ef: "EpochField") -> "FieldAggregates":
        """
        Aggregates of a snapshot without forming the N x N outer product.

        The cross sum is (sum r)^2 - sum r^2, which stays well conditioned
        because the square of the total dominates.
        """
        s = summation.total(ef.values)
        sq = summation.dot(ef.values, ef.values)
        cross = math.fsum([s * s, -sq])
        return cls(n=ef.n, sum_mu=s, sum_mu_outer=cross, sum_sq=sq,
                   sum_cross=cross, sum_mu_sq=sq)


# ── Snapshot ───────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class EpochField:
    """Site values r_i observed at one epoch."""
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _readonly(_as_vector(self.values, "field values")))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def subset(self, indices) -> "EpochField":
        return EpochField(self.values[np.asarray(indices, dtype=np.int64)])
