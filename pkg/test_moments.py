"""Tests for the closed-form mixed moments of R and S."""
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from spatialvar import DomainError, FieldAggregates, FieldStats, ReportingModel, WeightVector
from spatialvar.montecarlo import exact_moment_enumeration
from spatialvar.moments import (
    coefficient_identity_check,
    compute_moment_set,
    moment_R2S,
    moment_R2S_uniform,
    moment_RS,
    moment_RS_uniform,
    moment_S,
    moment_S_uniform,
    moments_large_N,
    uniform_R2S_coefficients,
    uniform_RS_coefficients,
    uniform_S_coefficients,
)
from spatialvar.moments import uniform as uniform_module
from spatialvar.moments.general import distinct_pairs, distinct_quadruples, distinct_triples
from spatialvar.utils import summation


# ── Distinct-index sums ────────────────────────────────────────────
@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_distinct_sums_match_loops(n, rng):
    beta = rng.uniform(0.1, 1.0, n)
    p = [float(n)] + [float(np.sum(beta ** k)) for k in range(1, 13)]
    pairs = sum(beta[i] * beta[j] ** 2 for i, j in itertools.permutations(range(n), 2))
    assert distinct_pairs(p, 1, 2) == pytest.approx(pairs, rel=1e-12, abs=1e-15)
    triples = sum(beta[i] * beta[j] * beta[k] ** 2
                  for i, j, k in itertools.permutations(range(n), 3))
    assert distinct_triples(p, 1, 1, 2) == pytest.approx(triples, rel=1e-12, abs=1e-14)
    quads = sum(beta[i] * beta[j] * beta[k] * beta[m]
                for i, j, k, m in itertools.permutations(range(n), 4))
    assert distinct_quadruples(p) == pytest.approx(quads, rel=1e-12, abs=1e-13)


@pytest.mark.parametrize("n", [1, 4, 8])
def test_offdiagonal_form_matches_loop(n, rng):
    x, y = rng.normal(size=n), rng.normal(size=n)
    m = rng.normal(size=(n, n))
    loop = sum(x[a] * y[b] * m[a, b] for a in range(n) for b in range(n) if a != b)
    assert summation.offdiagonal_form(x, y, m) == pytest.approx(loop, rel=1e-12, abs=1e-14)
    assert summation.diagonal_form(x, m) == pytest.approx(sum(x * np.diagonal(m)), rel=1e-12)


# ── Coefficient tables ─────────────────────────────────────────────
@pytest.mark.parametrize("n", [4, 7, 11])
def test_S_coefficient_table(n):
    F = Fraction
    assert uniform_S_coefficients(1, n) == {1: F(1)}
    assert uniform_S_coefficients(2, n) == {1: F(1, n), 2: F(n - 1, n)}
    assert uniform_S_coefficients(3, n) == {
        1: F(1, n ** 2), 2: F(3 * (n - 1), n ** 2), 3: F((n - 1) * (n - 2), n ** 2)}
    assert uniform_S_coefficients(4, n) == {
        1: F(1, n ** 3), 2: F(7 * (n - 1), n ** 3), 3: F(6 * (n - 1) * (n - 2), n ** 3),
        4: F((n - 1) * (n - 2) * (n - 3), n ** 3)}


@pytest.mark.parametrize("n", [4, 7, 11])
def test_RS_coefficient_table(n):
    F = Fraction
    assert uniform_RS_coefficients(0, n) == {1: F(1, n)}
    assert uniform_RS_coefficients(1, n) == {1: F(1, n ** 2), 2: F(n - 1, n ** 2)}
    assert uniform_RS_coefficients(2, n) == {
        1: F(1, n ** 3), 2: F(3 * (n - 1), n ** 3), 3: F((n - 1) * (n - 2), n ** 3)}


@pytest.mark.parametrize("n", [4, 7, 11])
def test_R2S_coefficient_tables(n):
    F = Fraction
    a0, b0 = uniform_R2S_coefficients(0, n)
    assert a0 == {1: F(1, n ** 2)}
    assert b0 == {1: F(0), 2: F(1, n ** 2)}
    a1, b1 = uniform_R2S_coefficients(1, n)
    assert a1 == {1: F(1, n ** 3), 2: F(n - 1, n ** 3)}
    assert b1 == {1: F(0), 2: F(2, n ** 3), 3: F(n - 2, n ** 3)}
    a2, b2 = uniform_R2S_coefficients(2, n)
    assert a2 == {1: F(1, n ** 4), 2: F(3 * (n - 1), n ** 4), 3: F((n - 1) * (n - 2), n ** 4)}
    assert b2 == {1: F(0), 2: F(4, n ** 4), 3: F(5 * (n - 2), n ** 4),
                  4: F((n - 2) * (n - 3), n ** 4)}
    a3, _ = uniform_R2S_coefficients(3, n)
    assert a3 == {1: F(1, n ** 5), 2: F(7 * (n - 1), n ** 5),
                  3: F(6 * (n - 1) * (n - 2), n ** 5),
                  4: F((n - 1) * (n - 2) * (n - 3), n ** 5)}


def test_coefficients_stop_at_site_count():
    assert set(uniform_S_coefficients(4, 2)) == {1, 2}
    assert uniform_S_coefficients(4, 1) == {1: Fraction(1)}


def test_single_site_has_no_pair_coefficients():
    with pytest.raises(DomainError):
        uniform_R2S_coefficients(0, 1)


@pytest.mark.parametrize("n", range(4, 9))
def test_coefficient_identity(n):
    for l in range(0, 3):
        for m in range(1, 5):
            assert coefficient_identity_check(l, m, n)


# ── Equal weights: closed forms against general forms ──────────────
@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9, 1.0])
def test_uniform_and_general_forms_agree(alpha, random_case):
    rm = ReportingModel(alpha)
    for n in range(2, 13):
        w, f = random_case(n, uniform=True)
        agg = FieldAggregates.from_field_stats(f)
        for l in range(1, 5):
            assert moment_S(l, w, rm) == pytest.approx(moment_S_uniform(l, n, rm), rel=1e-12)
        for l in range(0, 3):
            assert moment_RS(l, w, rm, f) == pytest.approx(
                moment_RS_uniform(l, n, rm, agg), rel=1e-12)
            assert moment_R2S(l, w, rm, f) == pytest.approx(
                moment_R2S_uniform(l, n, rm, agg), rel=1e-12)


def test_full_reporting_collapses_every_order(random_case):
    rm = ReportingModel(1.0)
    w, f = random_case(6)
    mean = float(w.beta @ f.mu)
    base = moment_R2S(0, w, rm, f)
    for l in range(1, 5):
        assert moment_S(l, w, rm) == pytest.approx(1.0, rel=1e-12)
    for l in (1, 2):
        assert moment_RS(l, w, rm, f) == pytest.approx(mean, rel=1e-12)
        assert moment_R2S(l, w, rm, f) == pytest.approx(base, rel=1e-12)
        es, ers, er2s = exact_moment_enumeration(w, rm, f, l)
        assert es == pytest.approx(1.0, rel=1e-12)
        assert ers == pytest.approx(mean, rel=1e-12)
        assert er2s == pytest.approx(base, rel=1e-12)


def test_S_moments_nondecreasing_in_alpha(random_case):
    w, _ = random_case(7)
    alphas = np.linspace(0.02, 1.0, 50)
    for l in range(1, 5):
        general = [moment_S(l, w, ReportingModel(a)) for a in alphas]
        closed = [moment_S_uniform(l, 7, ReportingModel(a)) for a in alphas]
        for values in (general, closed):
            assert all(later >= earlier for earlier, later in zip(values, values[1:]))


def test_first_moments_are_exact():
    w = WeightVector([0.2, 0.3, 0.5])
    rm = ReportingModel(0.37)
    f = FieldStats.from_covariance([1.0, 2.0, 3.0], np.eye(3))
    assert moment_S(1, w, rm) == 0.37
    assert moment_RS(0, w, rm, f) == pytest.approx(0.37 * 2.3, rel=1e-15)


def test_unsupported_orders():
    w, rm = WeightVector.uniform(3), ReportingModel(0.5)
    f = FieldStats.from_covariance(np.zeros(3), np.eye(3))
    for call in (lambda: moment_S(5, w, rm), lambda: moment_RS(3, w, rm, f),
                 lambda: moment_R2S(3, w, rm, f)):
        with pytest.raises(DomainError) as info:
            call()
        assert info.value.reason == "unsupported-order"


# ── Enumeration oracle ─────────────────────────────────────────────
@pytest.mark.parametrize("n", [3, 6, 10])
def test_closed_forms_match_enumeration(n, random_case, rng):
    for _ in range(7):
        w, f = random_case(n)
        rm = ReportingModel(float(rng.uniform(0.05, 1.0)))
        for l in range(1, 5):
            es, _, _ = exact_moment_enumeration(w, rm, f, l)
            assert moment_S(l, w, rm) == pytest.approx(es, rel=1e-10)
        for l in range(0, 3):
            _, ers, er2s = exact_moment_enumeration(w, rm, f, l)
            assert moment_RS(l, w, rm, f) == pytest.approx(ers, rel=1e-10)
            assert moment_R2S(l, w, rm, f) == pytest.approx(er2s, rel=1e-10)


def test_uniform_forms_beyond_second_order_match_enumeration(random_case):
    w, f = random_case(7, uniform=True)
    rm = ReportingModel(0.65)
    agg = FieldAggregates.from_field_stats(f)
    _, ers, er2s = exact_moment_enumeration(w, rm, f, 3)
    assert moment_RS_uniform(3, 7, rm, agg) == pytest.approx(ers, rel=1e-10)
    assert moment_R2S_uniform(3, 7, rm, agg) == pytest.approx(er2s, rel=1e-10)


def test_enumeration_two_sites_half_reporting():
    # r = 1 everywhere, so R = S and every moment is a power of S
    w = WeightVector.uniform(2)
    f = FieldStats(np.ones(2), np.ones((2, 2)))
    rm = ReportingModel(0.5)
    assert exact_moment_enumeration(w, rm, f, 2) == pytest.approx((0.375, 0.3125, 0.28125))
    assert exact_moment_enumeration(w, rm, f, 1)[1] == pytest.approx(0.375)
    assert exact_moment_enumeration(w, rm, f, 0)[2] == pytest.approx(0.375)


def test_enumeration_first_order_row(random_case):
    w, f = random_case(5)
    rm = ReportingModel(0.4)
    es, ers, er2s = exact_moment_enumeration(w, rm, f, 1)
    assert es == pytest.approx(0.4, rel=1e-14)
    assert ers == pytest.approx(moment_RS(1, w, rm, f), rel=1e-12)
    assert exact_moment_enumeration(w, rm, f, 0)[1] == pytest.approx(0.4 * float(w.beta @ f.mu))
    assert er2s == pytest.approx(moment_R2S(1, w, rm, f), rel=1e-12)


def test_enumeration_full_reporting(random_case):
    w, f = random_case(4)
    es, ers, er2s = exact_moment_enumeration(w, ReportingModel(1.0), f, 0)
    assert es == 1.0
    assert ers == pytest.approx(float(w.beta @ f.mu), rel=1e-12)
    assert er2s == pytest.approx(moment_R2S(0, w, ReportingModel(1.0), f), rel=1e-12)


# ── Moment sets and limits ─────────────────────────────────────────
def test_moment_set_uniform_matches_general(random_case):
    w, f = random_case(6, uniform=True)
    rm = ReportingModel(0.7)
    ms = compute_moment_set(w, rm, f)
    assert ms.alpha == 0.7
    assert ms.es3 == pytest.approx(moment_S(3, w, rm), rel=1e-12)
    assert ms.er2s2 == pytest.approx(moment_R2S(2, w, rm, f), rel=1e-12)
    rows = ms.as_rows()
    assert [row["moment"] for row in rows][:2] == ["es1", "es2"]
    assert len(rows) == 10


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9, 1.0])
def test_moment_set_closed_forms_agree_to_rounding(alpha, random_case):
    rm = ReportingModel(alpha)
    for n in (2, 3, 10, 25, 50):
        w, f = random_case(n, uniform=True)
        closed = compute_moment_set(w, rm, f)
        assert closed.er2s2 == pytest.approx(moment_R2S(2, w, rm, f), rel=1e-12)


def test_moment_set_rejects_drifting_closed_form(monkeypatch, random_case):
    w, f = random_case(5, uniform=True)
    exact = uniform_module.moment_S_uniform
    monkeypatch.setattr(uniform_module, "moment_S_uniform",
                        lambda l, n, rm: exact(l, n, rm) * (1.0 + 1e-10))
    with pytest.raises(AssertionError, match="es2"):
        compute_moment_set(w, ReportingModel(0.5), f)


def test_moment_set_general_weights(random_case):
    w, f = random_case(5)
    rm = ReportingModel(0.3)
    ms = compute_moment_set(w, rm, f)
    assert ms.ers1 == moment_RS(1, w, rm, f)


@pytest.mark.parametrize("alpha", [0.3, 0.8])
def test_large_N_limit_of_S_moments(alpha):
    rm = ReportingModel(alpha)
    n = 10_000
    for l in range(1, 5):
        rel = abs(moment_S_uniform(l, n, rm) - alpha ** l) / alpha ** l
        assert rel <= 1.1 * math.comb(l, 2) * (1 - alpha) / (alpha * n) + 1e-15
        if alpha == 0.8:
            assert rel < 1e-3


def test_large_N_moment_triple():
    agg = FieldAggregates(n=4, sum_mu=4.0, sum_mu_outer=12.0, sum_sq=8.0,
                          sum_cross=12.0, sum_mu_sq=4.0)
    rm = ReportingModel(0.5)
    es, ers, er2s = moments_large_N(2, rm, agg)
    assert es == 0.25
    assert ers == pytest.approx(0.5 * 1.0 * 0.25)
    assert er2s == pytest.approx((0.5 * 8.0 / 16 + 0.25 * 12.0 / 16) * 0.25)
