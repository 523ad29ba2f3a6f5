import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from oracles import cycle_type
from unitrace.partitions import Partition, enumerate_partitions
from unitrace.weingarten import (
    PoleError,
    WeingartenDomainError,
    weingarten_character,
    weingarten_recursive,
    weingarten_recursive_table,
    weingarten_table,
)


def _gram_inverse(m, n):
    """Wg = G^{-1} with G_{s,t} = N^{#cycles(s^-1 t)}, by exact elimination on S_m."""
    perms = list(permutations(range(m)))
    idx = {p: i for i, p in enumerate(perms)}
    size = len(perms)

    def compose_inv(s, t):
        inv = [0] * m
        for i, v in enumerate(s):
            inv[v] = i
        return tuple(inv[t[i]] for i in range(m))

    a = [[Fraction(n) ** len(cycle_type(compose_inv(s, t))) for t in perms] for s in perms]
    b = [Fraction(int(p == tuple(range(m)))) for p in perms]
    for col in range(size):
        piv = next(r for r in range(col, size) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(size):
            if r != col and a[r][col]:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                b[r] -= f * b[col]
    x = [b[i] / a[i][i] for i in range(size)]
    return {cycle_type(p): x[idx[p]] for p in perms}


def test_examples():
    for n in range(1, 9):
        assert weingarten_character(Partition((1,)), n) == Fraction(1, n)
        assert weingarten_recursive(Partition((1,)), n) == Fraction(1, n)
    assert weingarten_table(0, 3) == {Partition(()): 1}
    assert weingarten_recursive(Partition((2,)), 5) == Fraction(-1, 120)
    assert weingarten_recursive(Partition((1, 1)), 5) == Fraction(1, 24)
    assert weingarten_character(Partition((3,)), 5) == Fraction(1, 1260)
    assert weingarten_recursive(Partition((3,)), 5) == Fraction(1, 1260)


@pytest.mark.parametrize("m,n", [(2, 2), (2, 4), (3, 3), (3, 5), (4, 4), (4, 6)])
def test_gram_matrix_oracle(m, n):
    want = _gram_inverse(m, n)
    got = weingarten_table(m, n)
    for lam in enumerate_partitions(m):
        assert got[lam] == want[lam.parts]


@pytest.mark.parametrize("m", range(1, 6))
def test_routes_agree(m):
    for n in range(m, m + 4):
        assert weingarten_table(m, n) == weingarten_recursive_table(m, n)


@given(st.integers(1, 5), st.integers(0, 4), st.randoms(use_true_random=False))
def test_recursion_independent_of_part_choice(m, extra, rnd):
    n = m + extra
    chooser = lambda lam: rnd.choice(lam.parts)
    assert weingarten_recursive_table(m, n, chooser) == weingarten_recursive_table(m, n)


@pytest.mark.parametrize("m", range(1, 5))
def test_large_n_leading_order(m):
    lam = Partition((1,) * m)
    for n in (50, 100):
        ratio = Fraction(n) ** m * weingarten_character(lam, n)
        assert abs(ratio - 1) <= Fraction(2 * m * m, n)


def test_domain_errors():
    with pytest.raises(WeingartenDomainError):
        weingarten_table(3, 2)
    with pytest.raises(PoleError):
        weingarten_table(3, 2, strict=False)
    with pytest.raises(PoleError):
        weingarten_recursive(Partition((3,)), 2)


def test_orthogonality_relation_against_power_sums():
    # sum_lam g_lam M_lam(N) N^{ell(lam)} = 1 (Wg inverts G, row of the identity)
    from unitrace.partitions import class_size

    for m in range(1, 6):
        for n in range(m, m + 3):
            table = weingarten_table(m, n)
            assert sum(class_size(l) * table[l] * n ** l.length for l in table) == 1
