"""
Mixed moments of the weighted sums R = sum beta_i s_i r_i and
S = sum beta_i s_i for arbitrary weights.

The reporting indicators s_i are independent Bernoulli(alpha), so a
product of k indicators over a set of indices with d distinct members
has expectation alpha^d. Grouping the index tuples by their set
partition yields one alpha power per number of distinct sites; the sums
over pairwise distinct indices are then rewritten through power sums
p_k = sum beta^k and off-diagonal bilinear forms, which keeps every
moment at O(N^2) cost (O(N) when no second moments are involved).

Functions
---------
moment_S(l, w, rm)          l = 1..4
moment_RS(l, w, rm, f)      l = 0..2
moment_R2S(l, w, rm, f)     l = 0..2
"""
from __future__ import annotations

import math

from ..errors import DomainError, InputError
from ..fields import FieldStats, ReportingModel, WeightVector
from ..utils import summation

__all__ = [
    "moment_S",
    "moment_RS",
    "moment_R2S",
    "distinct_pairs",
    "distinct_triples",
    "distinct_quadruples",
]


# ── Distinct-index sums over the weights ───────────────────────────
def distinct_pairs(p, a: int, b: int) -> float:
    """sum over i != j of beta_i^a beta_j^b, from power sums ``p``."""
    return math.fsum([p[a] * p[b], -p[a + b]])


def distinct_triples(p, a: int, b: int, c: int) -> float:
    """sum over pairwise distinct i, j, k of beta_i^a beta_j^b beta_k^c."""
    return math.fsum([
        p[a] * p[b] * p[c],
        -p[a + b] * p[c],
        -p[a + c] * p[b],
        -p[b + c] * p[a],
        2.0 * p[a + b + c],
    ])


def distinct_quadruples(p) -> float:
    """sum over pairwise distinct i, j, k, m of beta_i beta_j beta_k beta_m."""
    return math.fsum([
        p[1] ** 4,
        -6.0 * p[1] ** 2 * p[2],
        3.0 * p[2] ** 2,
        8.0 * p[1] * p[3],
        -6.0 * p[4],
    ])


def _power_sums(w: WeightVector, top: int = 4) -> list:
    return [float(w.n)] + [w.power_sum(k) for k in range(1, top + 1)]


def _check_dimensions(w: WeightVector, f: FieldStats) -> None:
    if w.n != f.n:
        raise InputError(f"weights have {w.n} sites but the field has {f.n}",
                         "dimension-mismatch")


# ── E S^l ──────────────────────────────────────────────────────────
def moment_S(l: int, w: WeightVector, rm: ReportingModel) -> float:
    """
    E S^l for l = 1..4.

    Parameters
    ----------
    l : int
        Power of S
    w : WeightVector
        Site weights
    rm : ReportingModel
        Reporting probability

    Returns
    -------
    float
        The moment; exactly alpha for l = 1
    """
    a = rm.alpha
    if l == 1:
        return a
    p = _power_sums(w)
    if l == 2:
        return math.fsum([a * p[2], a ** 2 * distinct_pairs(p, 1, 1)])
    if l == 3:
        return math.fsum([
            a * p[3],
            3.0 * a ** 2 * distinct_pairs(p, 1, 2),
            a ** 3 * distinct_triples(p, 1, 1, 1),
        ])
    if l == 4:
        return math.fsum([
            a * p[4],
            a ** 2 * (4.0 * distinct_pairs(p, 1, 3) + 3.0 * distinct_pairs(p, 2, 2)),
            6.0 * a ** 3 * distinct_triples(p, 1, 1, 2),
            a ** 4 * distinct_quadruples(p),
        ])
    raise DomainError(f"moment_S supports l = 1..4 for general weights, got {l}",
                      "unsupported-order")


# ── E R S^l ────────────────────────────────────────────────────────
def moment_RS(l: int, w: WeightVector, rm: ReportingModel, f: FieldStats) -> float:
    """
    E R S^l for l = 0..2; linear in the mean vector.

    With q_k = sum beta_i^k E r_i the three rows are

    * l=0: alpha q_1
    * l=1: alpha q_2 + alpha^2 (q_1 p_1 - q_2)
    * l=2: alpha q_3 + alpha^2 [(q_1 p_2 - q_3) + 2 (q_2 p_1 - q_3)]
      + alpha^3 sum_{i,j,k distinct} beta_i E r_i beta_j beta_k
    """
    _check_dimensions(w, f)
    a = rm.alpha
    beta, mu = w.beta, f.mu
    q = [0.0] + [summation.dot(beta ** k, mu) for k in range(1, 4)]
    if l == 0:
        return a * q[1]
    p = _power_sums(w, 2)
    if l == 1:
        return math.fsum([a * q[2], a ** 2 * math.fsum([q[1] * p[1], -q[2]])])
    if l == 2:
        pairs = math.fsum([q[1] * p[2], -q[3], 2.0 * q[2] * p[1], -2.0 * q[3]])
        # fix i, the other two indices run over distinct sites j != k, both != i
        triples = math.fsum([q[1] * distinct_pairs(p, 1, 1), -2.0 * p[1] * q[2], 2.0 * q[3]])
        return math.fsum([a * q[3], a ** 2 * pairs, a ** 3 * triples])
    raise DomainError(f"moment_RS supports l = 0..2, got {l}", "unsupported-order")


# ── E R^2 S^l ──────────────────────────────────────────────────────
def moment_R2S(l: int, w: WeightVector, rm: ReportingModel, f: FieldStats) -> float:
    """
    E R^2 S^l for l = 0..2; bilinear in the second moments.

    Off-diagonal sums such as sum_{i != j} beta_i^3 beta_j E r_i r_j are
    formed as compensated bilinear forms with the diagonal removed;
    sums over a third or fourth distinct index are folded in through
    power-sum corrections.
    """
    _check_dimensions(w, f)
    a = rm.alpha
    b, m = w.beta, f.second
    p = _power_sums(w)

    def off(x, y):
        return summation.offdiagonal_form(x, y, m)

    def diag(x):
        return summation.diagonal_form(x, m)

    if l == 0:
        return math.fsum([a * diag(b ** 2), a ** 2 * off(b, b)])

    if l == 1:
        diag_pairs = math.fsum([p[1] * diag(b ** 2), -diag(b ** 3)])
        triples = math.fsum([p[1] * off(b, b), -2.0 * off(b ** 2, b)])
        return math.fsum([
            a * diag(b ** 3),
            a ** 2 * math.fsum([diag_pairs, 2.0 * off(b ** 2, b)]),
            a ** 3 * triples,
        ])

    if l == 2:
        d2, d3, d4 = diag(b ** 2), diag(b ** 3), diag(b ** 4)
        o11, o21, o31, o22 = off(b, b), off(b ** 2, b), off(b ** 3, b), off(b ** 2, b ** 2)
        single = d4
        two = math.fsum([
            p[2] * d2, -d4,                     # beta_i^2 beta_j^2 M_ii
            2.0 * o31,                          # beta_i^3 beta_j M_ij
            2.0 * p[1] * d3, -2.0 * d4,         # beta_i^3 beta_j M_ii
            2.0 * o22,                          # beta_i^2 beta_j^2 M_ij
        ])
        three = math.fsum([
            p[2] * o11, -2.0 * o31,                             # beta_i beta_j beta_k^2 M_ij
            distinct_pairs(p, 1, 1) * d2, -2.0 * p[1] * d3, 2.0 * d4,  # beta_i^2 beta_j beta_k M_ii
            4.0 * p[1] * o21, -4.0 * o31, -4.0 * o22,           # beta_i^2 beta_j beta_k M_ij
        ])
        four = math.fsum([
            distinct_pairs(p, 1, 1) * o11,
            -4.0 * p[1] * o21,
            4.0 * o31,
            2.0 * o22,
        ])
        return math.fsum([a * single, a ** 2 * two, a ** 3 * three, a ** 4 * four])

    raise DomainError(f"moment_R2S supports l = 0..2 for general weights, got {l}",
                      "unsupported-order")
