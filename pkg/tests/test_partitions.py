from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jackstein.partitions import (
    Dominance,
    Partition,
    arm_leg,
    c_prime_product,
    c_product,
    check_alpha,
    conjugate,
    dim_alpha,
    dominance_leq,
    enumerate_partitions,
    format_partition,
    format_scalar,
    n_stat,
    n_stat_conjugate,
    parse_partition,
    parse_scalar,
    psi_prime,
    skew_box,
    z_stat,
)

from oracles import c_pair, partition_count, syt_count

partitions_st = st.lists(st.integers(1, 7), max_size=7).map(lambda xs: Partition(sorted(xs, reverse=True)))
alphas_st = st.fractions(min_value=Fraction(1, 5), max_value=5).filter(lambda a: a > 0)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, 0])
    assert Partition([3, 2]).size == 5 and Partition([3, 2]).length == 2


@pytest.mark.parametrize("text,parts", [
    ("[3,2]", (3, 2)), ("[2,1^3]", (2, 1, 1, 1)), ("[]", ()), ("()", ()), ("(1^4)", (1, 1, 1, 1)),
])
def test_parse_partition(text, parts):
    assert parse_partition(text) == Partition(parts)


def test_parse_partition_rejects_garbage():
    with pytest.raises(ValueError):
        parse_partition("[a,b]")


def test_scalars():
    assert parse_scalar("3/2") == Fraction(3, 2)
    assert parse_scalar("4") == 4
    assert format_scalar(Fraction(6, 4)) == "3/2"
    assert format_scalar(Fraction(2)) == "2"
    for bad in ("0.5", "1/0", "abc", ""):
        with pytest.raises(ValueError):
            parse_scalar(bad)
    with pytest.raises(ValueError):
        check_alpha(0)
    with pytest.raises(ValueError):
        check_alpha("-1/2")


@pytest.mark.parametrize("lam,conj", [((3, 2), (2, 2, 1)), ((4,), (1, 1, 1, 1)), ((), ())])
def test_conjugate_examples(lam, conj):
    assert conjugate(Partition(lam)) == Partition(conj)


@pytest.mark.parametrize("lam,cell,al", [
    ((3, 2), (1, 1), (2, 1)), ((3, 2), (1, 3), (0, 0)), ((1, 1, 1), (1, 1), (0, 2)),
])
def test_arm_leg_examples(lam, cell, al):
    assert arm_leg(Partition(lam), *cell) == al


def test_arm_leg_outside_diagram():
    with pytest.raises(ValueError):
        arm_leg(Partition([3, 2]), 2, 3)
    with pytest.raises(ValueError):
        arm_leg(Partition([3, 2]), 3, 1)


@pytest.mark.parametrize("lam,val", [((3,), 0), ((1, 1, 1), 3), ((2, 1), 1)])
def test_n_stat_examples(lam, val):
    assert n_stat(Partition(lam)) == val


def test_hook_products_examples():
    lam = Partition([3, 2])
    # hook lengths 4,3,1,2,1 give 24 for each product at alpha=1
    assert c_product(lam, 1) * c_prime_product(lam, 1) == 576
    assert c_product(Partition([1]), Fraction(7, 3)) == 1
    assert c_prime_product(Partition([1]), Fraction(7, 3)) == Fraction(7, 3)
    assert c_product(Partition([2]), 2) == 3
    assert c_prime_product(Partition([2]), 2) == 8
    with pytest.raises(ValueError):
        c_product(lam, 0)


@pytest.mark.parametrize("lam,z", [((1, 1, 1, 1), 24), ((4,), 4), ((2, 1), 2), ((2, 2, 1), 8)])
def test_z_stat_examples(lam, z):
    assert z_stat(Partition(lam)) == z


def test_enumeration_examples():
    assert enumerate_partitions(3) == (Partition([3]), Partition([2, 1]), Partition([1, 1, 1]))
    assert enumerate_partitions(0) == (Partition(),)
    assert len(enumerate_partitions(5)) == 7


def test_enumeration_counts_match_pentagonal_recurrence():
    for n in range(41):
        assert len(enumerate_partitions(n)) == partition_count(n)


def test_dominance_examples():
    assert dominance_leq(Partition([2, 1]), Partition([3])) is Dominance.LEQ
    assert dominance_leq(Partition([3, 3]), Partition([4, 1, 1])) is Dominance.INCOMPARABLE
    assert dominance_leq(Partition([3]), Partition([2, 1])) is Dominance.GREATER
    lam = Partition([3, 1, 1])
    assert dominance_leq(lam, lam) is Dominance.LEQ
    with pytest.raises(ValueError):
        dominance_leq(Partition([2]), Partition([2, 1]))


def test_canonical_order_refines_dominance():
    for n in range(1, 11):
        parts = enumerate_partitions(n)
        for i, mu in enumerate(parts):
            for j, nu in enumerate(parts):
                if mu != nu and dominance_leq(mu, nu) is Dominance.LEQ:
                    assert j < i


def test_psi_prime_examples():
    a = Fraction(5, 2)
    for n in range(1, 7):
        assert psi_prime(Partition([n]), Partition([n - 1]) if n > 1 else Partition(), a) == 1
    got = psi_prime(Partition([2, 1]), Partition([2]), a)
    assert got == 2 * a * (a + 2) / ((2 * a + 1) * (a + 1))
    assert psi_prime(Partition([2, 1]), Partition([2]), 1) == 1
    with pytest.raises(ValueError):
        psi_prime(Partition([3, 1]), Partition([1, 1]), 2)


def test_psi_prime_positive_at_one():
    for n in range(1, 9):
        for lam in enumerate_partitions(n):
            for r in lam.removable_rows():
                assert psi_prime(lam, lam.remove_box(r), 1) > 0


def test_skew_box():
    assert skew_box(Partition([3, 2]), Partition([3, 1])) == (2, 2)
    assert skew_box(Partition([2, 1]), Partition([2])) == (2, 1)
    with pytest.raises(ValueError):
        skew_box(Partition([3, 2]), Partition([2, 2, 1]))


def test_dim_alpha_examples():
    assert dim_alpha(Partition([1, 1, 1, 1]), 1) == 1
    assert dim_alpha(Partition([2, 1]), 1) == 2
    assert dim_alpha(Partition([1]), Fraction(7, 2)) == 1
    for n in range(1, 8):
        for lam in enumerate_partitions(n):
            assert dim_alpha(lam, 1) == syt_count(tuple(lam))


def test_format_partition():
    assert format_partition(Partition([2, 1, 1])) == "[2,1,1]"
    assert str(Partition()) == "[]"


@given(partitions_st)
def test_conjugation_is_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert sum(conjugate(lam)) == sum(lam)


@given(partitions_st)
def test_n_of_conjugate_is_row_binomial_sum(lam):
    assert n_stat(conjugate(lam)) == n_stat_conjugate(lam) == sum(comb(p, 2) for p in lam)


@settings(max_examples=60)
@given(partitions_st, alphas_st)
def test_hook_products_match_oracle_and_swap_under_conjugation(lam, a):
    assert (c_product(lam, a), c_prime_product(lam, a)) == c_pair(lam, a)
    assert c_product(lam, a) == c_prime_product(conjugate(lam), 1 / a) * a ** sum(lam)


@given(partitions_st)
def test_add_remove_boxes_round_trip(lam):
    for r in lam.addable_rows() if lam else [1]:
        bigger = lam.add_box(r)
        assert r in bigger.removable_rows()
        assert bigger.remove_box(r) == lam


def test_conjugate_enumeration_is_bijection():
    for n in range(13):
        parts = enumerate_partitions(n)
        assert sorted(conjugate(p) for p in parts) == sorted(parts)


def test_sum_of_dims_squared():
    for n in range(1, 9):
        assert sum(dim_alpha(lam, 1) ** 2 for lam in enumerate_partitions(n)) == factorial(n)
