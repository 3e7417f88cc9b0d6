"""
MomentSet: the nine mixed moments consumed by the second-order variance.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict, List

import numpy as np

from ..fields import FieldAggregates, FieldStats, ReportingModel, WeightVector
from . import general, uniform

__all__ = ["MomentSet", "compute_moment_set"]

_AGREEMENT_RTOL = 1e-12
_AGREEMENT_ATOL = 1e-12      # times the largest raw moment, for near-zero moments


@dataclass(frozen=True)
class MomentSet:
    """
    E S^l (l = 1..4), E R S^l (l = 0..2) and E R^2 S^l (l = 0..2).

    ``es1`` is alpha itself, stored exactly.
    """
    es1: float
    es2: float
    es3: float
    es4: float
    ers0: float
    ers1: float
    ers2: float
    er2s0: float
    er2s1: float
    er2s2: float

    @property
    def alpha(self) -> float:
        return self.es1

    def as_rows(self) -> List[Dict[str, object]]:
        return [{"moment": name, "value": value} for name, value in asdict(self).items()]


def _general_set(w: WeightVector, rm: ReportingModel, f: FieldStats) -> MomentSet:
    return MomentSet(
        es1=rm.alpha,
        es2=general.moment_S(2, w, rm),
        es3=general.moment_S(3, w, rm),
        es4=general.moment_S(4, w, rm),
        ers0=general.moment_RS(0, w, rm, f),
        ers1=general.moment_RS(1, w, rm, f),
        ers2=general.moment_RS(2, w, rm, f),
        er2s0=general.moment_R2S(0, w, rm, f),
        er2s1=general.moment_R2S(1, w, rm, f),
        er2s2=general.moment_R2S(2, w, rm, f),
    )


def _uniform_set(rm: ReportingModel, agg: FieldAggregates) -> MomentSet:
    n = agg.n
    return MomentSet(
        es1=rm.alpha,
        es2=uniform.moment_S_uniform(2, n, rm),
        es3=uniform.moment_S_uniform(3, n, rm),
        es4=uniform.moment_S_uniform(4, n, rm),
        ers0=uniform.moment_RS_uniform(0, n, rm, agg),
        ers1=uniform.moment_RS_uniform(1, n, rm, agg),
        ers2=uniform.moment_RS_uniform(2, n, rm, agg),
        er2s0=uniform.moment_R2S_uniform(0, n, rm, agg),
        er2s1=uniform.moment_R2S_uniform(1, n, rm, agg),
        er2s2=uniform.moment_R2S_uniform(2, n, rm, agg),
    )


def _assert_agreement(closed: MomentSet, reference: MomentSet, scale: float) -> None:
    for name, value in asdict(closed).items():
        other = getattr(reference, name)
        tol = _AGREEMENT_ATOL * scale
        assert math.isclose(value, other, rel_tol=_AGREEMENT_RTOL, abs_tol=tol), (
            f"{name}: closed form {value!r} disagrees with general form {other!r}"
        )


def compute_moment_set(w: WeightVector, rm: ReportingModel, f: FieldStats) -> MomentSet:
    """
    Fill every moment the second-order variance needs.

    Equal weights go through the Stirling closed forms; when assertions
    are enabled the general formulas are evaluated alongside and must
    agree.

    Parameters
    ----------
    w : WeightVector
        Site weights
    rm : ReportingModel
        Reporting probability
    f : FieldStats
        Field moments, same site count as ``w``

    Returns
    -------
    MomentSet
    """
    general._check_dimensions(w, f)
    if w.is_uniform and w.n >= 2:
        closed = _uniform_set(rm, FieldAggregates.from_field_stats(f))
        if __debug__:
            scale = max(1.0, float(np.max(np.abs(f.second))), float(np.max(np.abs(f.mu))) ** 2)
            _assert_agreement(closed, _general_set(w, rm, f), scale)
        return closed
    return _general_set(w, rm, f)
