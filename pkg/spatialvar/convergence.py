"""
Diagnostics for whether the series behind the truncated variance
converges.

The expansion of R/S in powers of (S - alpha)/alpha converges when S
stays below 2 alpha. Three readings of that condition:

ratio_condition
    alpha > 1/2 guarantees it (S never exceeds 1)
hoeffding_bound
    an upper bound on P(S >= 2 E S) for any weights
sd_distance
    how many binomial standard deviations separate 2 alpha from alpha
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Dict, Tuple

from .errors import DomainError
from .fields import ReportingModel, WeightVector

__all__ = [
    "Verdict",
    "ConvergenceReport",
    "ratio_condition",
    "hoeffding_bound",
    "sd_distance",
    "convergence_report",
]

LIKELY_TAIL = 1e-3


class Verdict(str, enum.Enum):
    ASSURED = "assured"
    LIKELY = "likely"
    RISKY = "risky"


@dataclass(frozen=True)
class ConvergenceReport:
    alpha: float
    ratio_margin: float
    hoeffding_tail: float
    sd_distance: float
    verdict: Verdict

    def as_row(self) -> Dict[str, object]:
        row = asdict(self)
        row["verdict"] = self.verdict.value
        return row


def ratio_condition(rm: ReportingModel) -> Tuple[bool, float]:
    """
    Returns
    -------
    tuple[bool, float]
        (alpha > 1/2, 1 - (1 - alpha)/alpha)
    """
    a = rm.alpha
    return a > 0.5, 1.0 - (1.0 - a) / a


def hoeffding_bound(w: WeightVector, rm: ReportingModel) -> float:
    """
    exp(-2 alpha^2 / sum beta_i^2), a bound on P(S >= 2 alpha).

    At alpha = 1 the event needs S >= 2, which cannot happen, so 0.0 is
    returned. Equal weights give exp(-2 N alpha^2), the smallest value
    any weight vector over N sites can reach.
    """
    a = rm.alpha
    if a == 1.0:
        return 0.0
    return math.exp(-2.0 * a * a / w.power_sum(2))


def sd_distance(n: int, rm: ReportingModel) -> float:
    """sqrt(N alpha / (1 - alpha)); +inf at alpha = 1."""
    if n < 1:
        raise DomainError(f"need at least one site, got N={n}", "empty-input")
    a = rm.alpha
    if a == 1.0:
        return math.inf
    return math.sqrt(n * a / (1.0 - a))


def convergence_report(w: WeightVector, rm: ReportingModel) -> ConvergenceReport:
    """Bundle the three diagnostics with a single verdict."""
    holds, margin = ratio_condition(rm)
    tail = hoeffding_bound(w, rm)
    if holds:
        verdict = Verdict.ASSURED
    elif tail < LIKELY_TAIL:
        verdict = Verdict.LIKELY
    else:
        verdict = Verdict.RISKY
    return ConvergenceReport(
        alpha=rm.alpha,
        ratio_margin=margin,
        hoeffding_tail=tail,
        sd_distance=sd_distance(w.n, rm),
        verdict=verdict,
    )
