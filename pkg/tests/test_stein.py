import math
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jackstein.chains import jack_distribution
from jackstein.partitions import Partition, enumerate_partitions
from jackstein.stein import (
    conditional_mean_eigencheck,
    conditional_second_moment,
    conditional_second_moment_direct,
    general_eigencheck,
    kolmogorov_distance,
    max_jump_violation,
    moments,
    normal_cdf,
    raw_w,
    signed_square_law,
    stein_error_term1,
    stein_error_term3,
    stein_upper_bound,
    tail_bound_check,
    tail_probability,
    term1_formula,
    term1_lambda,
    term1_w,
    third_abs_moment,
    w_law,
    w_scale,
    w_statistic,
)

from oracles import kolmogorov_brute, mn_character, syt_count

P = Partition
TEST_ALPHAS = (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))
chain_alphas = st.fractions(min_value=1, max_value=6, max_denominator=12)


def test_raw_examples():
    a = Fraction(7, 3)
    assert w_statistic(P([3]), a).raw == 3 * a
    for n in range(2, 8):
        assert w_statistic(P([1] * n), 1).raw == -comb(n, 2)
    assert w_statistic(P([2, 1]), 1).raw == 0
    assert w_statistic(P([2, 1]), 2).normalized == pytest.approx(1 / math.sqrt(6))
    with pytest.raises(ValueError):
        w_statistic(P([1]), 1)


def test_raw_is_character_ratio_at_one():
    for n in range(2, 7):
        trans = (2,) + (1,) * (n - 2)
        for lam in enumerate_partitions(n):
            ratio = Fraction(mn_character(tuple(lam), trans), syt_count(tuple(lam)))
            assert raw_w(lam, Fraction(1)) / comb(n, 2) == ratio


def test_conditional_mean_is_linear():
    for a in TEST_ALPHAS:
        for n in range(2, 9):
            assert conditional_mean_eigencheck(n, a).value == 0


@pytest.mark.parametrize("a", TEST_ALPHAS)
def test_general_eigenrelations(a):
    for n in range(2, 7):
        for nu in enumerate_partitions(n):
            rep = general_eigencheck(n, nu, a)
            assert rep.exact, (n, nu)
        assert general_eigencheck(n, P([1] * n), a).m_eigenvalue == 1
        assert general_eigencheck(n, P([1] * n), a).l_eigenvalue == 1
        assert general_eigencheck(n, P([2] + [1] * (n - 2)), a).m_eigenvalue == 1 - Fraction(2, n)
    assert general_eigencheck(4, P([3, 1]), Fraction(3, 2)).exact


def test_moments():
    for a in TEST_ALPHAS:
        s_cache = {}
        for n in range(2, 9):
            s = s_cache.setdefault(n, w_scale(n, a))
            for r in range(7):
                rep = moments(n, a, r)
                assert rep.via_chain == rep.direct
            assert moments(n, a, 1).direct == 0
            assert moments(n, a, 2).w_moment_squared == 1
            assert moments(n, a, 3).w_moment_squared == (a - 1) ** 2 / s
            assert moments(n, a, 2).w_moment == pytest.approx(1.0)


def test_conditional_second_moment():
    assert conditional_second_moment(P([2, 1, 1]), 2) == conditional_second_moment_direct(P([2, 1, 1]), 2)
    assert conditional_second_moment(P([5]), 1) == conditional_second_moment_direct(P([5]), 1)
    for a in TEST_ALPHAS:
        for n in range(4, 9):
            pi = jack_distribution(n, a)
            total = 0
            for lam, p in pi.items():
                v = conditional_second_moment(lam, a)
                assert v == conditional_second_moment_direct(lam, a)
                total += p * v
            assert total == 1  # stationarity of L carries E W^2 = 1 forward
    with pytest.raises(ValueError):
        conditional_second_moment(P([2, 1]), 2)


def test_term1_examples():
    assert term1_lambda(6, 1) == term1_formula(6, 1) == Fraction(1, 10)
    computed, formula = stein_error_term1(5, 2)
    assert computed == formula
    for n in range(2, 12):
        assert term1_formula(n, 1) == Fraction(3 * n - 6, 4 * n * (n - 1))
    with pytest.raises(ValueError):
        stein_error_term1(4, 2)


def test_term1_closed_form_on_grid():
    for a in TEST_ALPHAS:
        for n in range(2, 9):
            assert term1_lambda(n, a) == term1_formula(n, a)


def test_conditioning_on_w_is_smaller():
    for a in (Fraction(1), Fraction(2)):
        for n in range(2, 11):
            assert term1_w(n, a) <= term1_lambda(n, a)


def test_third_moment_small_case():
    # n=2, alpha=1: W = +-1 and the chain swaps with probability 1/2
    assert stein_error_term3(2, 1) == 4
    assert third_abs_moment(2, 1) == pytest.approx(4.0)


def test_jump_bound_respected():
    for a in (Fraction(1), Fraction(5, 2)):
        for n in range(2, 11):
            assert max_jump_violation(n, a) is None


def test_third_moment_trend_alpha1():
    values = [third_abs_moment(n, 1) * n**1.5 for n in range(4, 13)]
    assert max(values) < 2 * values[0]


def test_tail_examples():
    rep = tail_bound_check(9, 1)
    assert rep.row_threshold == pytest.approx(2 * math.e * 3)
    assert rep.row_tail == 0 and rep.col_tail == 0 and rep.holds
    rep = tail_bound_check(30, 1)
    assert rep.row_bound == pytest.approx(900 / 4 ** (2 * math.e * math.sqrt(30)))
    assert rep.holds


def test_tail_duality():
    for a in (Fraction(3, 2), Fraction(3)):
        for n in range(1, 13):
            for t in range(1, n + 1):
                cols = tail_probability(jack_distribution(n, a), t, columns=True)
                assert cols == tail_probability(jack_distribution(n, 1 / a), t)


def test_w_duality():
    for a in (Fraction(3, 2), Fraction(2), Fraction(3)):
        for n in range(2, 9):
            mirrored = {-k: v for k, v in signed_square_law(n, 1 / a).items()}
            assert signed_square_law(n, a) == mirrored


def test_normal_cdf():
    assert normal_cdf(0) == 0.5
    assert normal_cdf(1.96) == pytest.approx(0.9750021048517795, abs=1e-12)
    assert 0 < normal_cdf(-8) < 1e-15
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(ValueError):
            normal_cdf(bad)


def test_kolmogorov_two_atoms():
    assert kolmogorov_distance(2, 1) == pytest.approx(normal_cdf(1) - 0.5, abs=1e-15)
    assert kolmogorov_distance(2, 1) == pytest.approx(0.3413447460685429, abs=1e-12)
    with pytest.raises(ValueError):
        kolmogorov_distance(1, 1)


@pytest.mark.parametrize("n,a", [(2, 1), (5, Fraction(3, 2)), (6, Fraction(3, 2)), (7, Fraction(3, 2)),
                                 (10, 2), (12, 3), (20, 1)])
def test_kolmogorov_against_high_precision_oracle(n, a):
    a = Fraction(a)
    want = kolmogorov_brute(w_law(n, a), w_scale(n, a))
    assert kolmogorov_distance(n, a) == pytest.approx(want, abs=1e-13)


def test_frozen_distances():
    # frozen from the high-precision oracle
    assert kolmogorov_distance(5, Fraction(3, 2)) == pytest.approx(0.14098385022596, abs=1e-10)
    assert kolmogorov_distance(10, 2) == pytest.approx(0.0751682, abs=1e-6)


def test_alpha1_distance_trend():
    d = [kolmogorov_distance(n, 1) for n in (5, 10, 15, 20, 25, 30)]
    assert all(x > y for x, y in zip(d, d[1:]))


def test_stein_bound_dominates_distance():
    for a in (Fraction(1), Fraction(3, 2), Fraction(2)):
        for n in range(2, 13):
            rep = stein_upper_bound(n, a)
            assert rep.bound >= rep.kolmogorov
            assert rep.bound_lambda >= rep.bound
            assert rep.tau == Fraction(2, n)
            assert rep.term1 == rep.term1_formula
    rep = stein_upper_bound(10, 1)
    assert rep.bound >= kolmogorov_distance(10, 1)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 7), chain_alphas)
def test_linearity_for_random_alpha(n, a):
    assert conditional_mean_eigencheck(n, a).exact
    assert moments(n, a, 1).direct == 0
    assert moments(n, a, 2).w_moment_squared == 1


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 7), chain_alphas)
def test_law_of_w_has_unit_mass(n, a):
    law = w_law(n, a)
    assert sum(p for _, p in law) == 1
    assert [w for w, _ in law] == sorted(w for w, _ in law)
