"""
Uniform-weight moments (beta_i = 1/N) in closed form.

With equal weights, E S^l is the probability-weighted count of ways l
draws land on exactly m distinct sites: a Stirling number {l over m}
times the N!/(N-m)! ordered choices of those sites, each carrying
alpha^m. The same counting gives E R S^l and E R^2 S^l, split by
whether the value factors sit on the same site or on two sites.

All coefficients are exact ``Fraction`` objects; floats appear only
when a polynomial in alpha is evaluated.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Tuple

from ..combinatorics import STIRLING_CAP, falling_factorial, stirling2
from ..errors import DomainError
from ..fields import FieldAggregates, ReportingModel

__all__ = [
    "uniform_S_coefficients",
    "uniform_RS_coefficients",
    "uniform_R2S_coefficients",
    "moment_S_uniform",
    "moment_RS_uniform",
    "moment_R2S_uniform",
    "coefficient_identity_check",
]

Coefficients = Dict[int, Fraction]


def _check_order(top: int, n: int) -> None:
    if top > STIRLING_CAP:
        raise DomainError(f"order {top} exceeds the Stirling cap {STIRLING_CAP}",
                          "stirling-cap")
    if n < 1:
        raise DomainError(f"need at least one site, got N={n}", "empty-input")


# ── Coefficient tables ─────────────────────────────────────────────
def uniform_S_coefficients(l: int, n: int) -> Coefficients:
    """
    Coefficients c_m with E S^l = sum_m c_m alpha^m.

    c_m = {l over m} N!/(N-m)! / N^l for m = 1..min(l, N).
    """
    if l < 1:
        raise DomainError(f"E S^l needs l >= 1, got {l}", "unsupported-order")
    _check_order(l, n)
    return {
        m: Fraction(stirling2(l, m) * falling_factorial(n, m), n ** l)
        for m in range(1, min(l, n) + 1)
    }


def uniform_RS_coefficients(l: int, n: int) -> Coefficients:
    """
    Coefficients c_m with E R S^l = (sum_i E r_i) sum_m c_m alpha^m.

    c_m = {l+1 over m} (N-1)!/(N-m)! / N^(l+1).
    """
    if l < 0:
        raise DomainError(f"E R S^l needs l >= 0, got {l}", "unsupported-order")
    _check_order(l + 1, n)
    return {
        m: Fraction(stirling2(l + 1, m) * falling_factorial(n - 1, m - 1), n ** (l + 1))
        for m in range(1, min(l + 1, n) + 1)
    }


def uniform_R2S_coefficients(l: int, n: int) -> Tuple[Coefficients, Coefficients]:
    """
    Coefficient pair (a_m, b_m) with

        E R^2 S^l = sum_i E r_i^2 * sum_m a_m alpha^m
                  + sum_{i != j} E r_i r_j * sum_m b_m alpha^m

    a_m = {l+1 over m} (N-1)!/(N-m)! / N^(l+2)
    b_m = ({l+2 over m} - {l+1 over m}) (N-2)!/(N-m)! / N^(l+2), b_1 = 0

    Raises
    ------
    DomainError
        For N = 1, where no pair of distinct sites exists
    """
    if l < 0:
        raise DomainError(f"E R^2 S^l needs l >= 0, got {l}", "unsupported-order")
    _check_order(l + 2, n)
    if n < 2:
        raise DomainError("E R^2 S^l in closed form needs N >= 2", "single-site")
    scale = n ** (l + 2)
    a = {
        m: Fraction(stirling2(l + 1, m) * falling_factorial(n - 1, m - 1), scale)
        for m in range(1, min(l + 1, n) + 1)
    }
    b = {1: Fraction(0)}
    for m in range(2, min(l + 2, n) + 1):
        spread = stirling2(l + 2, m) - stirling2(l + 1, m)
        b[m] = Fraction(spread * falling_factorial(n - 2, m - 2), scale)
    return a, b


def _polynomial(coefficients: Coefficients, alpha: float) -> float:
    return math.fsum(float(c) * alpha ** m for m, c in coefficients.items())


# ── Evaluators ─────────────────────────────────────────────────────
def moment_S_uniform(l: int, n: int, rm: ReportingModel) -> float:
    """E S^l with equal weights over ``n`` sites."""
    return _polynomial(uniform_S_coefficients(l, n), rm.alpha)


def moment_RS_uniform(l: int, n: int, rm: ReportingModel, agg: FieldAggregates) -> float:
    """E R S^l with equal weights; needs only sum_i E r_i."""
    _check_sites(n, agg)
    return agg.sum_mu * _polynomial(uniform_RS_coefficients(l, n), rm.alpha)


def moment_R2S_uniform(l: int, n: int, rm: ReportingModel, agg: FieldAggregates) -> float:
    """E R^2 S^l with equal weights; needs sum E r_i^2 and sum_{i != j} E r_i r_j."""
    _check_sites(n, agg)
    a, b = uniform_R2S_coefficients(l, n)
    return math.fsum([
        agg.sum_sq * _polynomial(a, rm.alpha),
        agg.sum_cross * _polynomial(b, rm.alpha),
    ])


def _check_sites(n: int, agg: FieldAggregates) -> None:
    if agg.n != n:
        raise DomainError(f"aggregates describe {agg.n} sites, not {n}", "dimension-mismatch")


# ── Identity ───────────────────────────────────────────────────────
def coefficient_identity_check(l: int, m: int, n: int) -> bool:
    """
    Check N a_m + N(N-1) b_m = {l+2 over m} N!/(N-m)! / N^(l+2) exactly.

    Both sides count the ways l+2 draws land on m distinct sites; the
    left side splits them by whether the first two draws coincide.
    Orders m beyond N have empty coefficients on both sides.
    """
    a, b = uniform_R2S_coefficients(l, n)
    left = n * a.get(m, Fraction(0)) + n * (n - 1) * b.get(m, Fraction(0))
    if m > n:
        right = Fraction(0)
    else:
        right = Fraction(stirling2(l + 2, m) * falling_factorial(n, m), n ** (l + 2))
    return left == right
