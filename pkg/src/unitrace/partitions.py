"""Integer partitions and the partition-indexed combinatorics used throughout.

Partitions are enumerated in reverse lexicographic order, e.g. for m=4::

    (4), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)

This is the canonical order used for character tables, cache files and every
``sum over lambda |- m`` in the package.  Changing it invalidates on-disk
caches, so it is versioned by :data:`CANONICAL_ORDER`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial, prod
from typing import Iterable, Iterator

CANONICAL_ORDER = "revlex-1"
DEFAULT_MAX_WEIGHT = 64


class PartitionLimitError(ValueError):
    """Raised when an enumeration would exceed the configured weight ceiling."""


@dataclass(frozen=True, order=False)
class Partition:
    """A partition stored as a non-increasing tuple of positive parts.

    Any iterable of non-negative integers is accepted; zeros are dropped and
    the parts are sorted, so ``Partition((1, 3, 1, 0))`` equals
    ``Partition((3, 1, 1))``.
    """

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        object.__setattr__(self, "parts", tuple(sorted((p for p in parts if p), reverse=True)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __repr__(self) -> str:
        return f"Partition({self.parts})"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @cached_property
    def frequencies(self) -> dict[int, int]:
        """Map ``j -> r_j``, the number of parts equal to ``j``."""
        return dict(Counter(self.parts))

    def union(self, other: "Partition") -> "Partition":
        return Partition(self.parts + tuple(other))

    def remove_part(self, part: int) -> "Partition":
        parts = list(self.parts)
        parts.remove(part)
        return Partition(parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(sum(1 for p in self.parts if p > i) for i in range(self.parts[0]))

    def cells(self) -> Iterator[tuple[int, int]]:
        """Yield (row, column) of every box, 1-based, row by row."""
        for i, row in enumerate(self.parts, start=1):
            for j in range(1, row + 1):
                yield i, j

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"3,1,1"``, ``"(3,1,1)"``, ``"3 1 1"`` or ``"()"``."""
        text = text.strip().strip("()[]")
        if not text:
            return cls(())
        return cls(int(t) for t in text.replace(",", " ").split())


def identity_type(m: int) -> Partition:
    """Cycle type ``(1^m)`` of the identity permutation."""
    return Partition((1,) * m)


def enumerate_partitions(m: int, max_weight: int = DEFAULT_MAX_WEIGHT) -> list[Partition]:
    """All partitions of ``m`` in reverse lexicographic order."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m > max_weight:
        raise PartitionLimitError(
            f"refusing to enumerate partitions of {m} (ceiling {max_weight}); "
            "raise max_weight explicitly if this is intended"
        )
    return list(_partitions(m))


@lru_cache(maxsize=None)
def _partitions(m: int) -> tuple[Partition, ...]:
    return tuple(Partition(p) for p in _revlex(m, m))


def _revlex(m: int, largest: int) -> Iterator[tuple[int, ...]]:
    if m == 0:
        yield ()
        return
    for first in range(min(m, largest), 0, -1):
        for rest in _revlex(m - first, first):
            yield (first,) + rest


def partitions_with_max_length(m: int, max_length: int) -> list[Partition]:
    """Partitions of ``m`` with at most ``max_length`` parts, canonical order.

    Avoids materialising all p(m) partitions when only short ones are needed.
    """

    def rec(rem: int, largest: int, slots: int) -> Iterator[tuple[int, ...]]:
        if rem == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(rem, largest), 0, -1):
            if first * slots < rem:
                break
            for rest in rec(rem - first, first, slots - 1):
                yield (first,) + rest

    return [Partition(p) for p in rec(m, m, max_length)]


def partition_index(m: int) -> dict[Partition, int]:
    return {p: i for i, p in enumerate(_partitions(m))}


def class_size(lam: Partition) -> int:
    """Number of permutations of cycle type ``lam``: m! / prod j^{r_j} r_j!."""
    denom = prod(j**r * factorial(r) for j, r in lam.frequencies.items())
    return factorial(lam.weight) // denom


def irrep_dimension(lam: Partition) -> int:
    """Dimension of the irreducible representation of S_m labelled by ``lam``.

    Frobenius' form of the hook formula with the shifted parts
    ``l_j = lam_j + ell - j``: ``m! prod_{i<j} (l_i - l_j) / prod_j l_j!``.
    """
    ell = lam.length
    shifted = [lam[j] + ell - 1 - j for j in range(ell)]
    num = prod(shifted[i] - shifted[j] for i in range(ell) for j in range(i + 1, ell))
    den = prod(factorial(s) for s in shifted)
    return factorial(lam.weight) * num // den


def contents(lam: Partition) -> list[int]:
    """Content ``j - i`` of every cell (row ``i``, column ``j``), row by row.

    With this sign convention ``f_lam(N) = prod (N + content)``; the roots of
    ``f_lam`` are the negated contents.
    """
    return [j - i for i, j in lam.cells()]


def set_partition_count(lam: Partition) -> int:
    """Ways to split an n-set into blocks of sizes ``lam``: n! / prod (j!)^{r_j} r_j!."""
    denom = prod(factorial(j) ** r * factorial(r) for j, r in lam.frequencies.items())
    return factorial(lam.weight) // denom


@dataclass(frozen=True)
class Decomposition:
    """A multiset of sub-partitions whose union is a given partition.

    ``blocks`` holds the distinct sub-partitions with their repetition counts
    (``pi_mu``); ``multiplicity`` is the number of set partitions of the
    (labelled) parts of the whole partition that collapse onto this multiset.
    """

    whole: Partition
    blocks: tuple[tuple[Partition, int], ...]
    multiplicity: int

    @property
    def members(self) -> list[Partition]:
        return [mu for mu, count in self.blocks for _ in range(count)]


def decomposition_multiplicity(lam: Partition, members: Iterable[Partition]) -> int:
    """``prod_j r_j! / prod_{distinct mu} (prod_j s^mu_j!)^{pi_mu} pi_mu!``."""
    counts = Counter(members)
    num = prod(factorial(r) for r in lam.frequencies.values())
    den = 1
    for mu, pi in counts.items():
        den *= prod(factorial(s) for s in mu.frequencies.values()) ** pi * factorial(pi)
    assert num % den == 0
    return num // den


@lru_cache(maxsize=4096)
def decompositions(lam: Partition) -> tuple[Decomposition, ...]:
    """Every distinct way of writing ``lam`` as a union of sub-partitions.

    Ordered by number of blocks, then canonically; the first entry is always
    the trivial decomposition ``{lam}``.
    """
    found: set[tuple[Partition, ...]] = set()
    for blocks in _multiset_partitions(tuple(lam.parts)):
        found.add(tuple(sorted((Partition(b) for b in blocks), key=_block_key)))
    out = []
    for members in sorted(found, key=lambda ms: (len(ms), [_block_key(b) for b in ms])):
        counts = Counter(members)
        blocks = tuple(sorted(counts.items(), key=lambda kv: _block_key(kv[0])))
        out.append(Decomposition(lam, blocks, decomposition_multiplicity(lam, members)))
    return tuple(out)


def _block_key(mu: Partition) -> tuple:
    return (-mu.weight, tuple(-p for p in mu.parts))


def _multiset_partitions(parts: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    # Distinct multiset partitions of a sorted tuple: the first element always
    # opens a block, and the rest of that block is a sub-multiset chosen by
    # per-value counts, which avoids generating label-permuted duplicates.
    if not parts:
        yield []
        return
    head, tail = parts[0], parts[1:]
    counts = sorted(Counter(tail).items(), reverse=True)
    for chosen in _sub_multisets(counts):
        block = (head,) + chosen
        rest = list(tail)
        for v in chosen:
            rest.remove(v)
        for others in _multiset_partitions(tuple(rest)):
            yield [block] + others


def _sub_multisets(counts: list[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
    if not counts:
        yield ()
        return
    (value, n), rest = counts[0], counts[1:]
    for k in range(n + 1):
        for tail in _sub_multisets(rest):
            yield (value,) * k + tail
