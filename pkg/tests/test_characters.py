from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest

from oracles import cycle_type, permutation_character
from unitrace.characters import (
    CacheChecksumError,
    character,
    character_table,
    load_table,
    save_table,
)
from unitrace.partitions import Partition, class_size, enumerate_partitions, identity_type, irrep_dimension


def _sign(w):
    s = 1
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            if w[i] > w[j]:
                s = -s
    return s


def _representative(lam):
    perm, start = [], 0
    for part in lam.parts:
        perm += [start + (k + 1) % part for k in range(part)]
        start += part
    return tuple(perm)


def _determinantal_character(mu, perm):
    # chi^mu = sum_w sgn(w) eta^{(mu_i - i + w(i))}: signed sum of permutation-module traces
    ell = mu.length
    total = 0
    for w in permutations(range(ell)):
        comp = [mu.parts[i] - i + w[i] for i in range(ell)]
        if any(c < 0 for c in comp):
            continue
        shape = tuple(sorted((c for c in comp if c), reverse=True))
        total += _sign(w) * permutation_character(shape, perm)
    return total


@pytest.mark.parametrize("m", range(1, 6))
def test_characters_match_permutation_modules(m):
    for lam in enumerate_partitions(m):
        perm = _representative(lam)
        assert cycle_type(perm) == lam.parts
        for mu in enumerate_partitions(m):
            assert character(mu, lam) == _determinantal_character(mu, perm)


def test_examples():
    assert character(Partition((2, 1)), Partition((3,))) == -1
    assert character_table(1).values == ((1,),)
    t3 = character_table(3)
    assert t3.partitions == (Partition((3,)), Partition((2, 1)), Partition((1, 1, 1)))
    assert t3.row(Partition((2, 1))) == (-1, 0, 2)
    assert t3.row(Partition((1, 1, 1))) == (1, -1, 1)


@pytest.mark.parametrize("m", range(1, 11))
def test_orthogonality(m):
    assert character_table(m).check_orthogonality()


@pytest.mark.parametrize("m", range(1, 7))
def test_identity_class_and_trivial(m):
    t = character_table(m)
    for mu in t.partitions:
        assert t(mu, identity_type(m)) == irrep_dimension(mu)
        assert all(abs(v) <= irrep_dimension(mu) for v in t.row(mu))
    assert all(v == 1 for v in t.row(Partition((m,))))


def test_integer_valued():
    for m in range(1, 9):
        assert all(isinstance(v, int) for row in character_table(m).values for v in row)


def test_weight_mismatch():
    with pytest.raises(ValueError):
        character(Partition((2,)), Partition((1,)))


def test_cache_round_trip_and_tamper(tmp_path, caplog):
    path = tmp_path / "chartable-m5.txt"
    fresh = character_table(5, tmp_path)
    assert path.exists()
    assert load_table(path).values == fresh.values
    lines = path.read_text().splitlines()
    lines[3] = lines[3][:-1] + ("9" if lines[3][-1] != "9" else "8")
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CacheChecksumError):
        load_table(path)
    with pytest.raises(CacheChecksumError):
        character_table(5, path, recompute_on_corrupt=False)
    with caplog.at_level("WARNING"):
        rebuilt = character_table(5, path)
    assert "corrupt" in caplog.text
    assert rebuilt.values == fresh.values
    assert load_table(path).values == fresh.values


def test_stale_order_header_rejected(tmp_path):
    path = tmp_path / "t.txt"
    save_table(character_table(3), path)
    text = path.read_text().replace("order=revlex-1", "order=lex-0")
    path.write_text(text)
    with pytest.raises(CacheChecksumError):
        load_table(path)


def test_class_function_projection():
    # sum_lam g_lam chi^mu_lam = m! [mu = (m)]
    for m in range(1, 8):
        t = character_table(m)
        for mu in t.partitions:
            s = sum(class_size(lam) * t(mu, lam) for lam in t.partitions)
            assert s == (factorial(m) if mu == Partition((m,)) else 0)
