"""Weingarten coefficients M_lambda(N) for the unitary group.

Two independent routes:

* :func:`weingarten_character` sums ``dim V_mu chi^mu_lambda / f_mu(N)`` over
  irreps (valid for ``N >= m``);
* :func:`weingarten_recursive` solves the linear relations obtained by
  multiplying a permutation by the transpositions ``(i m)``, level by level in
  ``m`` starting from ``M_() = 1``.

For a class ``lam`` with a distinguished part ``k``::

    N M_lam + sum_{p+q=k, p,q>=1} M_{lam - k + (p,q)}
            + sum_{other parts l} l * M_{lam - k - l + (k+l)}
        = [k == 1] M_{lam - k}

Each level is a dense p(m) x p(m) system, solved exactly.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial
from typing import Callable

from .characters import character_table
from .partitions import Partition, enumerate_partitions, irrep_dimension, partition_index
from .symfun import f_lambda_product


class WeingartenDomainError(ValueError):
    """N below the weight of the partition: the character formula does not apply."""


class PoleError(ZeroDivisionError):
    """A coefficient has a pole at the requested N."""

    def __init__(self, lam, n, detail=""):
        super().__init__(f"M_{lam}({n}) has a pole{': ' + detail if detail else ''}")
        self.partition = lam
        self.n = n


_char_cache: dict[tuple[int, int], dict[Partition, Fraction]] = {}
_rec_cache: dict[tuple[int, int], dict[Partition, Fraction]] = {}
_lock = threading.Lock()


def weingarten_table(m: int, n: int, *, strict: bool = True) -> dict[Partition, Fraction]:
    """``{lam: M_lam(N)}`` for every ``lam |- m`` by the character formula."""
    if strict and n < m:
        raise WeingartenDomainError(
            f"character formula needs N >= m (got N={n}, m={m}); below that the "
            "coefficients hit the De Wit-'t Hooft poles"
        )
    key = (m, n)
    cached = _char_cache.get(key)
    if cached is not None:
        return cached
    if m == 0:
        result = {Partition(()): Fraction(1)}
    else:
        table = character_table(m)
        weights = []
        for mu in table.partitions:
            f = f_lambda_product(mu, n)
            if f == 0:
                raise PoleError(mu, n, f"f_{mu}({n}) = 0")
            weights.append(Fraction(irrep_dimension(mu), f))
        mfact = factorial(m)
        result = {}
        for j, lam in enumerate(table.partitions):
            total = sum((w * table.values[i][j] for i, w in enumerate(weights) if table.values[i][j]), Fraction(0))
            result[lam] = total / mfact
    with _lock:
        _char_cache.setdefault(key, result)
    return result


def weingarten_character(lam: Partition, n: int, *, strict: bool = True) -> Fraction:
    """M_lam(N) = (1/m!) sum_mu dim V_mu chi^mu_lam / f_mu(N)."""
    return weingarten_table(lam.weight, n, strict=strict)[lam]


PartChooser = Callable[[Partition], int]


def _smallest_part(lam: Partition) -> int:
    return lam[-1]


def weingarten_recursive_table(
    m: int, n: int, choose: PartChooser | None = None
) -> dict[Partition, Fraction]:
    """Solve the recursion up to weight ``m``; ``choose`` picks the distinguished part."""
    key = (m, n)
    if choose is None and key in _rec_cache:
        return _rec_cache[key]
    if m == 0:
        return {Partition(()): Fraction(1)}
    lower = weingarten_recursive_table(m - 1, n, choose)
    pick = choose or _smallest_part
    parts = enumerate_partitions(m)
    index = partition_index(m)
    size = len(parts)
    rows = []
    rhs = []
    for lam in parts:
        k = pick(lam)
        if k not in lam.parts:
            raise ValueError(f"chooser returned {k}, not a part of {lam}")
        row = [Fraction(0)] * size
        row[index[lam]] += n
        rest = lam.remove_part(k)
        for p in range(1, k):
            row[index[rest.union(Partition((p, k - p)))]] += 1
        others = list(rest.parts)
        for pos, part in enumerate(others):
            merged = Partition(others[:pos] + others[pos + 1:] + [part + k])
            row[index[merged]] += part
        rows.append(row)
        rhs.append(lower[rest] if k == 1 else Fraction(0))
    try:
        solution = _solve(rows, rhs)
    except ZeroDivisionError:
        raise PoleError(Partition((m,)), n, "singular recursion step") from None
    result = dict(zip(parts, solution))
    if choose is None:
        with _lock:
            _rec_cache.setdefault(key, result)
    return result


def weingarten_recursive(lam: Partition, n: int, choose: PartChooser | None = None) -> Fraction:
    try:
        return weingarten_recursive_table(lam.weight, n, choose)[lam]
    except PoleError as exc:
        raise PoleError(lam, n, "singular recursion step") from exc


def _solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(b)
    a = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] / p
                for c in range(col, n + 1):
                    a[r][c] -= factor * a[col][c]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        x[r] = (a[r][n] - sum(a[r][c] * x[c] for c in range(r + 1, n))) / a[r][r]
    return x
