"""
Exact oracles by summing over every reporting mask.

Mask k (0 <= k < 2^N) reports site i when bit i of k is set and has
probability alpha^|k| (1 - alpha)^(N - |k|). Masks are processed in
chunks of 2^16 consecutive integers; chunk partial sums are combined
with ``math.fsum`` in chunk order, so an optional worker pool cannot
change the result.

Functions
---------
exact_enumeration_epoch(ef, w, rm, workers=1) -> (float, float)
    Conditional mean and variance of the spatial mean of a snapshot
exact_enumeration_field(w, rm, f) -> (float, float)
    The same for a random field given by its first and second moments
exact_moment_enumeration(w, rm, f, l) -> (float, float, float)
    Unconditional E S^l, E R S^l, E R^2 S^l
"""
from __future__ import annotations

import math
from multiprocessing import Pool
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import DomainError, InputError
from ..fields import EpochField, FieldStats, ReportingModel, WeightVector
from ..utils import summation

__all__ = [
    "ENUMERATION_CAP",
    "MOMENT_ENUMERATION_CAP",
    "mask_chunk",
    "exact_enumeration_epoch",
    "exact_enumeration_field",
    "exact_moment_enumeration",
]


# ── Constants ──────────────────────────────────────────────────────
ENUMERATION_CAP        = 20
MOMENT_ENUMERATION_CAP = 12
CHUNK                  = 1 << 16


def mask_chunk(start: int, stop: int, n: int) -> np.ndarray:
    """Boolean masks for the integers start..stop-1, one row each."""
    ks = np.arange(start, stop, dtype=np.int64)
    return ((ks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


def _probabilities(masks: np.ndarray, alpha: float) -> np.ndarray:
    k = masks.sum(axis=1)
    n = masks.shape[1]
    return np.power(alpha, k) * np.power(1.0 - alpha, n - k)


def _spans(first: int, n: int) -> List[Tuple[int, int]]:
    end = 1 << n
    return [(start, min(start + CHUNK, end)) for start in range(first, end, CHUNK)]


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise DomainError(f"exhaustive enumeration needs N <= {cap}, got {n}",
                          "enumeration-cap")


def _fan_out(func, tasks: Sequence, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with Pool(workers) as pool:
            return pool.map(func, tasks)
    return [func(task) for task in tasks]


# ── Snapshot ───────────────────────────────────────────────────────
def _epoch_chunk(task) -> Tuple[float, float, float]:
    start, stop, n, alpha, beta, weighted_dev, center = task
    masks = mask_chunk(start, stop, n)
    s = (masks * beta).sum(axis=1)
    keep = s > 0.0
    p = _probabilities(masks[keep], alpha)
    d = (masks[keep] * weighted_dev).sum(axis=1) / s[keep] - center
    return summation.total(p), summation.dot(p, d), summation.dot(p, d * d)


def exact_enumeration_epoch(
    ef: EpochField,
    w: WeightVector,
    rm: ReportingModel,
    workers: int = 1,
) -> Tuple[float, float]:
    """
    Exact (E f, Var f) of the spatial mean, conditioned on S > 0.

    Parameters
    ----------
    ef : EpochField
        Site values, N <= 20
    w : WeightVector
    rm : ReportingModel
    workers : int
        Optional process pool over mask chunks

    Returns
    -------
    Tuple[float, float]
        Conditional mean and variance of sum beta s r / sum beta s

    Raises
    ------
    DomainError
        Above the enumeration cap
    InputError
        On a length mismatch
    """
    if w.n != ef.n:
        raise InputError(f"{w.n} weights for a field of {ef.n} sites", "dimension-mismatch")
    n = ef.n
    _check_cap(n, ENUMERATION_CAP)
    shift = float(np.median(ef.values))
    weighted_dev = w.beta * (ef.values - shift)
    spans = _spans(1, n)

    # first pass: normalizer and mean; second pass: variance about that mean
    first = _fan_out(_epoch_chunk,
                     [(a, b, n, rm.alpha, w.beta, weighted_dev, 0.0) for a, b in spans],
                     workers)
    z = math.fsum(part[0] for part in first)
    mean_dev = math.fsum(part[1] for part in first) / z
    second = _fan_out(_epoch_chunk,
                      [(a, b, n, rm.alpha, w.beta, weighted_dev, mean_dev) for a, b in spans],
                      workers)
    variance = max(0.0, math.fsum(part[2] for part in second) / z)
    return shift + mean_dev, variance


# ── Random field ───────────────────────────────────────────────────
def exact_enumeration_field(
    w: WeightVector,
    rm: ReportingModel,
    f: FieldStats,
) -> Tuple[float, float]:
    """
    Exact (E f, Var f) when the values themselves are random.

    For a fixed mask x = s * beta the spatial mean has conditional
    moments E[f | x] = x.mu / S and E[f^2 | x] = x^T M x / S^2; the
    result mixes them over all masks with S > 0.
    """
    if w.n != f.n:
        raise InputError(f"{w.n} weights for a field of {f.n} sites", "dimension-mismatch")
    n = f.n
    _check_cap(n, ENUMERATION_CAP)
    z_parts, m1_parts, m2_parts = [], [], []
    for start, stop in _spans(1, n):
        masks = mask_chunk(start, stop, n)
        x = masks * w.beta
        s = x.sum(axis=1)
        keep = s > 0.0
        x, s = x[keep], s[keep]
        p = _probabilities(masks[keep], rm.alpha)
        m1 = (x @ f.mu) / s
        m2 = np.einsum("ki,ij,kj->k", x, f.second, x) / (s * s)
        z_parts.append(summation.total(p))
        m1_parts.append(summation.dot(p, m1))
        m2_parts.append(summation.dot(p, m2))
    z = math.fsum(z_parts)
    mean = math.fsum(m1_parts) / z
    return mean, math.fsum(m2_parts) / z - mean * mean


# ── Unconditional moments ──────────────────────────────────────────
def exact_moment_enumeration(
    w: WeightVector,
    rm: ReportingModel,
    f: FieldStats,
    l: int,
) -> Tuple[float, float, float]:
    """
    E S^l, E R S^l and E R^2 S^l summed over all 2^N masks.

    No conditioning: the empty mask contributes S = 0 (and 0^0 = 1).
    For a mask, E[R S^l] = (x.mu) S^l and E[R^2 S^l] = (x^T M x) S^l.
    """
    if w.n != f.n:
        raise InputError(f"{w.n} weights for a field of {f.n} sites", "dimension-mismatch")
    if l < 0:
        raise DomainError(f"moment order must be non-negative, got {l}", "unsupported-order")
    n = f.n
    _check_cap(n, MOMENT_ENUMERATION_CAP)
    masks = mask_chunk(0, 1 << n, n)
    x = masks * w.beta
    p = _probabilities(masks, rm.alpha)
    power = np.power(x.sum(axis=1), l)
    linear = x @ f.mu
    quadratic = np.einsum("ki,ij,kj->k", x, f.second, x)
    return (
        summation.dot(p, power),
        summation.dot(p, linear * power),
        summation.dot(p, quadratic * power),
    )
