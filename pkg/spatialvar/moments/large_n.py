"""Large-N limits of the uniform-weight moments (l much smaller than N)."""
from __future__ import annotations

from typing import Tuple

from ..combinatorics import STIRLING_CAP
from ..errors import DomainError
from ..fields import FieldAggregates, ReportingModel

__all__ = ["moments_large_N", "mean_R", "mean_R2"]


def mean_R(rm: ReportingModel, agg: FieldAggregates) -> float:
    """E R = alpha (1/N) sum E r_i."""
    return rm.alpha * agg.sum_mu / agg.n


def mean_R2(rm: ReportingModel, agg: FieldAggregates) -> float:
    """E R^2 = (alpha/N^2) sum E r_i^2 + (alpha^2/N^2) sum_{i != j} E r_i r_j."""
    n2 = float(agg.n) ** 2
    return rm.alpha * agg.sum_sq / n2 + rm.alpha ** 2 * agg.sum_cross / n2


def moments_large_N(l: int, rm: ReportingModel, agg: FieldAggregates) -> Tuple[float, float, float]:
    """
    Leading behaviour of (E S^l, E R S^l, E R^2 S^l) as N grows.

    Returns
    -------
    tuple of float
        (alpha^l, E R alpha^l, E R^2 alpha^l)
    """
    if l < 0 or l + 2 > STIRLING_CAP:
        raise DomainError(f"order l={l} outside 0..{STIRLING_CAP - 2}", "stirling-cap")
    power = rm.alpha ** l
    return power, mean_R(rm, agg) * power, mean_R2(rm, agg) * power
