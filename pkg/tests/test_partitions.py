from collections import Counter
from math import factorial

import pytest
from hypothesis import given, strategies as st

from oracles import bell, brute_partitions, class_sizes, set_partitions
from unitrace.partitions import (
    Partition,
    PartitionLimitError,
    class_size,
    contents,
    decomposition_multiplicity,
    decompositions,
    enumerate_partitions,
    irrep_dimension,
    partitions_with_max_length,
    set_partition_count,
)

partitions_st = st.lists(st.integers(1, 6), min_size=0, max_size=6).map(Partition)


def test_enumeration_small_cases():
    assert enumerate_partitions(0) == [Partition(())]
    assert len(enumerate_partitions(4)) == 5
    assert len(enumerate_partitions(6)) == 11


@pytest.mark.parametrize("m", range(0, 11))
def test_enumeration_matches_brute_force(m):
    got = enumerate_partitions(m)
    assert {p.parts for p in got} == brute_partitions(m)
    assert len(got) == len(set(got))


def test_enumeration_is_reverse_lexicographic():
    parts = [p.parts for p in enumerate_partitions(7)]
    assert parts == sorted(parts, reverse=True)


def test_weight_ceiling():
    with pytest.raises(PartitionLimitError):
        enumerate_partitions(65)
    with pytest.raises(ValueError):
        enumerate_partitions(-1)


@given(st.lists(st.integers(0, 5), max_size=8))
def test_partition_normalisation(parts):
    p = Partition(parts)
    assert list(p.parts) == sorted(p.parts, reverse=True)
    assert all(v >= 1 for v in p.parts)
    assert Partition(list(parts) + [0, 0]) == p
    assert sum(j * r for j, r in p.frequencies.items()) == p.weight
    assert sum(p.frequencies.values()) == p.length


@given(partitions_st)
def test_conjugate_is_involution(p):
    assert p.conjugate().conjugate() == p
    assert p.conjugate().weight == p.weight


def test_parse():
    assert Partition.parse("(3,1,1)") == Partition((3, 1, 1))
    assert Partition.parse("1 3") == Partition((3, 1))
    assert Partition.parse("()") == Partition(())
    with pytest.raises(ValueError):
        Partition((2, -1))


def test_class_size_examples():
    assert class_size(Partition((1, 1, 1, 1))) == 1
    assert class_size(Partition((3,))) == 2
    assert class_size(Partition((2, 1))) == 3


@pytest.mark.parametrize("m", range(1, 7))
def test_class_size_counts_permutations(m):
    counts = class_sizes(m)
    for lam in enumerate_partitions(m):
        assert class_size(lam) == counts[lam.parts]


@pytest.mark.parametrize("m", range(1, 11))
def test_class_sizes_and_dimensions_sum(m):
    parts = enumerate_partitions(m)
    assert sum(class_size(p) for p in parts) == factorial(m)
    assert sum(irrep_dimension(p) ** 2 for p in parts) == factorial(m)


def _standard_tableaux(shape):
    # count by removing corners recursively
    shape = tuple(v for v in shape if v)
    if sum(shape) <= 1:
        return 1
    total = 0
    for i, row in enumerate(shape):
        if i + 1 == len(shape) or shape[i + 1] < row:
            total += _standard_tableaux(shape[:i] + (row - 1,) + shape[i + 1 :])
    return total


def test_irrep_dimension():
    assert irrep_dimension(Partition((5,))) == 1
    assert irrep_dimension(Partition((1,) * 5)) == 1
    assert irrep_dimension(Partition((2, 1))) == 2
    for m in range(1, 9):
        for lam in enumerate_partitions(m):
            assert irrep_dimension(lam) == _standard_tableaux(lam.parts)


def test_contents():
    assert contents(Partition((1,))) == [0]
    assert sorted(contents(Partition((2, 2)))) == [-1, 0, 0, 1]
    lam = Partition((5, 4, 4, 3, 1))
    roots = sorted(-c for c in contents(lam))
    displayed = [0, -1, -2, -3, -4, 1, 0, -1, -2, 2, 1, 0, -1, 3, 2, 1, 4]
    assert roots == sorted(-v for v in displayed)


@given(partitions_st.filter(lambda p: p.weight > 0))
def test_contents_properties(lam):
    c = contents(lam)
    assert len(c) == lam.weight
    assert max(c) == lam.parts[0] - 1
    assert min(c) == 1 - lam.length
    assert c.count(0) == min(lam.length, lam.parts[0], sum(1 for i, r in enumerate(lam.parts) if r > i))


def test_set_partition_count_examples():
    assert set_partition_count(Partition((4,))) == 1
    assert set_partition_count(Partition((2, 1, 1))) == 6
    assert set_partition_count(Partition((2, 2))) == 3


@pytest.mark.parametrize("n", range(1, 8))
def test_set_partition_count_brute_force(n):
    counts = Counter(tuple(sorted((len(b) for b in sp), reverse=True)) for sp in set_partitions(range(n)))
    for lam in enumerate_partitions(n):
        assert set_partition_count(lam) == counts[lam.parts]
    assert sum(set_partition_count(lam) for lam in enumerate_partitions(n)) == bell(n)


def _brute_decompositions(lam):
    # set partitions of the labelled parts, collapsed to multisets of sub-partitions
    out = Counter()
    for sp in set_partitions(range(lam.length)):
        members = tuple(sorted((Partition(lam.parts[i] for i in block) for block in sp), key=lambda p: (p.weight, p.parts)))
        out[members] += 1
    return out


def test_decomposition_examples():
    (only,) = decompositions(Partition((2,)))
    assert only.members == [Partition((2,))] and only.multiplicity == 1
    assert len(decompositions(Partition((3, 2, 1)))) == 5
    target = sorted([Partition((1,)), Partition((3, 1))], key=lambda p: p.parts)
    found = [d for d in decompositions(Partition((3, 1, 1))) if sorted(d.members, key=lambda p: p.parts) == target]
    assert len(found) == 1 and found[0].multiplicity == 2


@pytest.mark.parametrize("m", range(1, 9))
def test_decompositions_match_brute_force(m):
    for lam in enumerate_partitions(m):
        decs = decompositions(lam)
        assert decs[0].members == [lam]
        brute = _brute_decompositions(lam)
        got = {tuple(sorted(d.members, key=lambda p: (p.weight, p.parts))): d.multiplicity for d in decs}
        assert got == dict(brute)
        # each decomposition counted once; multiplicities add up to the Bell number of the parts
        assert sum(d.multiplicity for d in decs) == bell(lam.length)
        for d in decs:
            assert Partition(p for mu in d.members for p in mu.parts) == lam
            assert decomposition_multiplicity(lam, d.members) == d.multiplicity


def test_partitions_with_max_length():
    for m in range(0, 10):
        for k in range(0, 5):
            want = [p for p in enumerate_partitions(m) if p.length <= k]
            assert sorted(partitions_with_max_length(m, k), key=lambda p: p.parts) == sorted(want, key=lambda p: p.parts)
