from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import schur_by_ssyt, ssyt_count
from unitrace.characters import character_table
from unitrace.partitions import Partition, class_size, enumerate_partitions, irrep_dimension
from unitrace.symfun import (
    complete_homogeneous,
    f_lambda_factorial,
    f_lambda_product,
    f_lambda_sum,
    power_sum_product,
    schur_at_identity,
    schur_bialternant,
    schur_eval,
    schur_jacobi_trudi,
)

rationals = st.fractions(min_value=0, max_value=5, max_denominator=7)


def F(*v):
    return tuple(Fraction(x) for x in v)


def test_power_sum_examples():
    assert power_sum_product(Partition((1,)), F(1, 1, 1)) == 3
    assert power_sum_product(Partition((2, 1)), F(4, 0)) == 64
    for n in range(1, 6):
        for lam in enumerate_partitions(4):
            assert power_sum_product(lam, F(*[1] * n)) == n**lam.length


def test_schur_at_identity_examples():
    assert schur_at_identity(Partition((1,)), 7) == 7
    assert schur_at_identity(Partition((2, 1)), 3) == 8
    # only one tableau (rows 11 / 22) has shape (2,2) and entries <= 2
    assert schur_at_identity(Partition((2, 2)), 2) == ssyt_count((2, 2), 2) == 1
    assert schur_at_identity(Partition((2, 2)), 3) == ssyt_count((2, 2), 3) == 6


@pytest.mark.parametrize("m", range(1, 5))
def test_schur_at_identity_counts_ssyt(m):
    for lam in enumerate_partitions(m):
        for n in range(1, 4):
            assert schur_at_identity(lam, n) == ssyt_count(lam.parts, n)


def test_schur_eval_examples():
    assert schur_eval(Partition((2,)), F(1, 1)) == 3
    assert schur_eval(Partition((1, 1)), F(4, 0)) == 0
    assert schur_eval(Partition((2, 1)), F(1, 1, 1)) == 8


def test_schur_routes_agree_with_tableaux():
    x = F(Fraction(1, 2), 2, 3)
    for m in range(1, 5):
        for lam in enumerate_partitions(m):
            want = schur_by_ssyt(lam.parts, x)
            assert schur_eval(lam, x) == want
            assert schur_jacobi_trudi(lam, x) == want
            assert schur_bialternant(lam, x) == want


@pytest.mark.parametrize("m", range(1, 7))
def test_schur_identity_spectrum(m):
    for lam in enumerate_partitions(m):
        for n in range(1, 9):
            assert schur_eval(lam, F(*[1] * n)) == schur_at_identity(lam, n)


@given(st.lists(rationals, min_size=1, max_size=4), st.integers(1, 5))
def test_power_sums_expand_in_schur_functions(x, m):
    # p_mu = sum_lam chi^lam_mu s_lam
    x = tuple(x)
    t = character_table(m)
    h = complete_homogeneous(x, m)
    for mu in t.partitions:
        rhs = sum(t(lam, mu) * schur_jacobi_trudi(lam, x, h) for lam in t.partitions)
        assert power_sum_product(mu, x) == rhs


@given(st.lists(rationals, min_size=1, max_size=4), rationals, st.integers(1, 4))
def test_schur_homogeneity(x, c, m):
    for lam in enumerate_partitions(m):
        assert schur_jacobi_trudi(lam, tuple(c * v for v in x)) == c**m * schur_jacobi_trudi(lam, tuple(x))


def test_f_lambda_examples():
    assert f_lambda_sum(Partition((2,)), 5) == 30
    assert f_lambda_product(Partition((1, 1)), 1) == 0
    assert f_lambda_product(Partition((1,)), 9) == 9
    assert f_lambda_product(Partition((2,)), 5) == 30
    assert f_lambda_product(Partition((2, 1)), 4) == 60


def test_f_lambda_roots_of_displayed_shape():
    lam = Partition((5, 4, 4, 3, 1))
    roots = [0, -1, -2, -3, -4, 1, 0, -1, -2, 2, 1, 0, -1, 3, 2, 1, 4]
    for r in set(roots):
        assert f_lambda_product(lam, r) == 0
    # multiplicities: the polynomial is prod (N - r) over the listed roots
    for n in (7, 11, -9):
        want = 1
        for r in roots:
            want *= n - r
        assert f_lambda_product(lam, n) == want


@pytest.mark.parametrize("m", range(1, 7))
def test_f_lambda_sum_equals_product(m):
    for lam in enumerate_partitions(m):
        for n in range(-3, 13):
            assert f_lambda_sum(lam, n) == f_lambda_product(lam, n)
        for n in range(lam.length, 9):
            assert f_lambda_factorial(lam, n) == f_lambda_product(lam, n)


@pytest.mark.parametrize("m", range(1, 7))
def test_f_lambda_from_schur(m):
    from math import factorial

    for lam in enumerate_partitions(m):
        for n in range(1, 11):
            assert f_lambda_product(lam, n) == Fraction(factorial(m) * schur_at_identity(lam, n), irrep_dimension(lam))


def test_greatest_root_of_one_row():
    for m in range(1, 8):
        lam = Partition((m,))
        assert f_lambda_product(lam, -(m - 1)) == 0
        assert all(f_lambda_product(lam, -r) != 0 for r in range(m, m + 3))


def test_complete_homogeneous():
    x = F(1, 2)
    assert complete_homogeneous(x, 3) == [1, 3, 7, 15]
    assert class_size(Partition((1,))) == 1
