"""
Seeded ensemble simulation of the spatial mean of one snapshot.

Each ensemble member draws an independent reporting mask from the
counter-based stream in ``streams``, redraws it while no positive-weight
site reports, and records the ratio sum beta_i s_i r_i / sum beta_i s_i.
The ensemble variance of those ratios is the Monte-Carlo reference for
the single-snapshot estimators.

Members are processed in fixed blocks whose size depends only on N, so
the concatenated ratio array (and hence every reported number) is the
same whether the blocks are handled in this process or by a pool.

Classes
-------
MaskEnsemble
    Block-wise generator of conditioned masks with rejection accounting
EnsembleResult
    Mean, variance and uncertainty of the ensemble of spatial means

Functions
---------
simulate_epoch_ensemble(ef, w, rm, n_members, seed, workers=1) -> EnsembleResult
jackknife_variance_error(values) -> float
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..errors import DomainError, InputError
from ..fields import EpochField, ReportingModel, WeightVector
from ..utils import summation
from .streams import bernoulli_masks

__all__ = [
    "MaskEnsemble",
    "EnsembleResult",
    "block_size",
    "simulate_epoch_ensemble",
    "jackknife_variance_error",
]

log = logging.getLogger(__name__)


# ── Constants ──────────────────────────────────────────────────────
BLOCK_ELEMENTS    = 1 << 20        # target mask entries per block
MIN_BLOCK         = 256
MAX_BLOCK         = 65_536
FEASIBILITY_LIMIT = 0.999          # largest allowed P(no positive-weight site reports)


def block_size(n_sites: int) -> int:
    """Members per block; a function of N only."""
    return max(MIN_BLOCK, min(MAX_BLOCK, BLOCK_ELEMENTS // max(n_sites, 1)))


# ── Masks ──────────────────────────────────────────────────────────
@dataclass
class MaskEnsemble:
    """
    Conditioned reporting masks for ``n_members`` members.

    Masks are never stored for the whole ensemble; ``stream`` yields one
    block at a time and keeps ``rejected_count`` up to date.

    Attributes
    ----------
    n_members : int
        Number of ensemble members
    seed : int
        64-bit seed of the counter-based stream
    alpha : float
        Reporting probability
    n_sites : int
        Mask width N
    positive : Optional[np.ndarray]
        Sites that count towards S > 0; all sites when None
    rejected_count : int
        Masks redrawn so far because no counted site reported
    """
    n_members: int
    seed: int
    alpha: float
    n_sites: int
    positive: Optional[np.ndarray] = None
    rejected_count: int = field(default=0, init=False)

    def spans(self) -> List[Tuple[int, int]]:
        size = block_size(self.n_sites)
        return [(start, min(start + size, self.n_members))
                for start in range(0, self.n_members, size)]

    def draw_block(self, start: int, stop: int) -> Tuple[np.ndarray, int]:
        """
        Masks for members ``start``..``stop - 1`` and the number of redraws.

        A rejected member keeps its index and bumps its attempt counter,
        so its replacement is as reproducible as the original draw.
        """
        positive = self.positive
        if positive is None:
            positive = np.ones(self.n_sites, dtype=bool)
        members = np.arange(start, stop, dtype=np.uint64)
        attempts = np.zeros(members.size, dtype=np.uint64)
        masks = bernoulli_masks(self.seed, members, self.n_sites, self.alpha, attempts)
        empty = ~np.any(masks & positive, axis=1)
        rejected = 0
        while np.any(empty):
            redo = np.flatnonzero(empty)
            rejected += int(redo.size)
            attempts[redo] += np.uint64(1)
            masks[redo] = bernoulli_masks(self.seed, members[redo], self.n_sites,
                                          self.alpha, attempts[redo])
            empty[redo] = ~np.any(masks[redo] & positive, axis=1)
        return masks, rejected

    def stream(self) -> Iterator[np.ndarray]:
        """Yield mask blocks in member order."""
        for start, stop in self.spans():
            masks, rejected = self.draw_block(start, stop)
            self.rejected_count += rejected
            yield masks


# ── Results ────────────────────────────────────────────────────────
@dataclass(frozen=True)
class EnsembleResult:
    """
    Summary of an ensemble of spatial means.

    Attributes
    ----------
    mean_of_means : float
        Average of the members' spatial means
    ensemble_variance : float
        Sample variance of the spatial means (n - 1 denominator)
    n_members : int
    rejected_count : int
        All-zero masks that were redrawn
    standard_error_of_variance : float
        Jackknife standard error of ``ensemble_variance``
    """
    mean_of_means: float
    ensemble_variance: float
    n_members: int
    rejected_count: int
    standard_error_of_variance: float

    def as_row(self) -> Dict[str, object]:
        return {
            "mean_of_means": self.mean_of_means,
            "ensemble_variance": self.ensemble_variance,
            "n_members": self.n_members,
            "rejected_count": self.rejected_count,
            "standard_error_of_variance": self.standard_error_of_variance,
        }


def _block_ratios(masks: np.ndarray, beta: np.ndarray, weighted_dev: np.ndarray) -> np.ndarray:
    # ratio minus the shift, row by row
    return (masks * weighted_dev).sum(axis=1) / (masks * beta).sum(axis=1)


def _simulate_block(task) -> Tuple[np.ndarray, int]:
    ensemble, start, stop, beta, weighted_dev = task
    masks, rejected = ensemble.draw_block(start, stop)
    return _block_ratios(masks, beta, weighted_dev), rejected


def jackknife_variance_error(values) -> float:
    """
    Leave-one-out standard error of the unbiased sample variance.

    Each leave-one-out variance follows from the full sum of squared
    deviations: SS_(i) = SS - n/(n-1) d_i^2, so the whole jackknife is
    O(n).

    Returns
    -------
    float
        sqrt((n-1)/n * sum_i (v_(i) - mean v_(.))^2), or NaN below three values
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if n < 3:
        return math.nan
    mean, _ = summation.mean_and_variance(values)
    d2 = (values - mean) ** 2
    ss = summation.total(d2)
    loo = (ss - n / (n - 1) * d2) / (n - 2)
    loo_mean = summation.total(loo) / n
    return math.sqrt((n - 1) / n * summation.total((loo - loo_mean) ** 2))


# ── Simulation ─────────────────────────────────────────────────────
def simulate_epoch_ensemble(
    ef: EpochField,
    w: WeightVector,
    rm: ReportingModel,
    n_members: int,
    seed: int,
    workers: int = 1,
) -> EnsembleResult:
    """
    Monte-Carlo variance of the spatial mean of one snapshot.

    Parameters
    ----------
    ef : EpochField
        Site values r_i
    w : WeightVector
        Averaging weights, same length as ``ef``
    rm : ReportingModel
        Reporting probability alpha
    n_members : int
        Ensemble size, at least 2
    seed : int
        64-bit seed; the result is a pure function of the inputs and this seed
    workers : int
        Processes for the block fan-out; does not change the result

    Returns
    -------
    EnsembleResult

    Raises
    ------
    InputError
        On a length mismatch or fewer than two members
    DomainError
        When an all-zero draw is so likely that rejection is infeasible
    """
    if w.n != ef.n:
        raise InputError(f"{w.n} weights for a field of {ef.n} sites", "dimension-mismatch")
    if n_members < 2:
        raise InputError(f"need at least 2 ensemble members, got {n_members}", "member-count")
    positive = w.beta > 0.0
    n_positive = int(np.count_nonzero(positive))
    miss = (1.0 - rm.alpha) ** n_positive
    if miss > FEASIBILITY_LIMIT:
        raise DomainError(
            f"P(no site reports) = {miss:.6g} exceeds {FEASIBILITY_LIMIT}; "
            "rejection sampling would not terminate in practice",
            "infeasible-rejection",
        )

    shift = float(np.median(ef.values))
    weighted_dev = w.beta * (ef.values - shift)
    ensemble = MaskEnsemble(n_members, seed, rm.alpha, ef.n, positive)

    if workers > 1:
        tasks = [(ensemble, start, stop, w.beta, weighted_dev) for start, stop in ensemble.spans()]
        log.debug("Fanning %d blocks out to %d workers", len(tasks), workers)
        with Pool(workers) as pool:
            parts = pool.map(_simulate_block, tasks)
        blocks = [ratios for ratios, _ in parts]
        rejected = sum(count for _, count in parts)
    else:
        blocks = [_block_ratios(masks, w.beta, weighted_dev) for masks in ensemble.stream()]
        rejected = ensemble.rejected_count

    ratios = shift + np.concatenate(blocks)
    mean, variance = summation.mean_and_variance(ratios, ddof=1)
    se = jackknife_variance_error(ratios)
    log.info("Ensemble: N=%d alpha=%r members=%d rejected=%d variance=%.6g",
             ef.n, rm.alpha, n_members, rejected, variance)
    return EnsembleResult(mean, variance, n_members, rejected, se)
