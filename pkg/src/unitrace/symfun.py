"""Power sums, Schur functions and the content polynomial f_lambda(N).

Spectra are sequences of exact non-negative rationals, typically the squared
singular values of A (the eigenvalues of A A*).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Sequence

from .characters import character_table
from .partitions import Partition, class_size, contents, enumerate_partitions, irrep_dimension

Spectrum = Sequence[Fraction]


def as_spectrum(values) -> tuple[Fraction, ...]:
    spec = tuple(Fraction(v) for v in values)
    if not spec:
        raise ValueError("spectrum must have at least one entry")
    if any(v < 0 for v in spec):
        raise ValueError("spectrum entries must be non-negative")
    return spec


def power_sum(j: int, x: Spectrum) -> Fraction:
    return sum((v**j for v in x), Fraction(0))


def power_sum_product(lam: Partition, x: Spectrum) -> Fraction:
    """p_lam(x) = prod_j p_j(x)^{r_j}."""
    x = as_spectrum(x)
    return prod((power_sum(j, x) ** r for j, r in lam.frequencies.items()), start=Fraction(1))


def schur_at_identity(lam: Partition, n: int) -> int:
    """s_lam(1, ..., 1) with ``n`` ones, via the product over pairs of rows.

    Zero when ``lam`` has more than ``n`` rows.
    """
    if lam.length > n:
        return 0
    parts = list(lam.parts) + [0] * (n - lam.length)
    num = prod(parts[j] - parts[k] + k - j for j in range(n) for k in range(j + 1, n))
    den = prod(k - j for j in range(n) for k in range(j + 1, n))
    return num // den


def schur_eval(lam: Partition, x: Spectrum) -> Fraction:
    """s_lam(x) = (1/m!) sum_mu g_mu chi^lam_mu p_mu(x).

    Works for any non-negative spectrum, including repeated entries.
    """
    x = as_spectrum(x)
    m = lam.weight
    if m == 0:
        return Fraction(1)
    table = character_table(m)
    row = table.row(lam)
    psums = {j: power_sum(j, x) for j in range(1, m + 1)}
    total = Fraction(0)
    for chi, mu in zip(row, table.partitions):
        if chi:
            total += class_size(mu) * chi * prod(
                (psums[j] ** r for j, r in mu.frequencies.items()), start=Fraction(1)
            )
    return total / factorial(m)


def complete_homogeneous(x: Spectrum, upto: int) -> list[Fraction]:
    """[h_0(x), ..., h_upto(x)] by adding one variable at a time."""
    h = [Fraction(1)] + [Fraction(0)] * upto
    for v in x:
        for k in range(1, upto + 1):
            h[k] += v * h[k - 1]
    return h


def schur_jacobi_trudi(lam: Partition, x: Spectrum, h: Sequence[Fraction] | None = None) -> Fraction:
    """s_lam(x) = det(h_{lam_i - i + j}); cheap for large weights and short shapes."""
    x = as_spectrum(x)
    if lam.length > len(x):
        return Fraction(0)
    if h is None or len(h) <= lam.weight:
        h = complete_homogeneous(x, lam.weight)
    ell = lam.length

    def hk(k: int) -> Fraction:
        return h[k] if k >= 0 else Fraction(0)

    mat = [[hk(lam[i] - i + j) for j in range(ell)] for i in range(ell)]
    return det(mat)


def schur_bialternant(lam: Partition, x: Spectrum) -> Fraction:
    """Ratio of alternants; requires pairwise-distinct entries."""
    x = as_spectrum(x)
    n = len(x)
    if len(set(x)) != n:
        raise ZeroDivisionError("bialternant needs pairwise-distinct variables")
    if lam.length > n:
        return Fraction(0)
    parts = list(lam.parts) + [0] * (n - lam.length)
    num = det([[xi ** (parts[j] + n - 1 - j) for j in range(n)] for xi in x])
    den = det([[xi ** (n - 1 - j) for j in range(n)] for xi in x])
    return num / den


def det(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in mat]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] / p
                row_r, row_c = a[r], a[col]
                for c in range(col + 1, n):
                    row_r[c] -= factor * row_c[c]
    return sign * result


def f_lambda_product(lam: Partition, n: int) -> int:
    """f_lam(N) = prod over cells of (N - i + j); total in N."""
    return prod(n + c for c in contents(lam))


def f_lambda_factorial(lam: Partition, n: int) -> Fraction:
    """prod_j (N + lam_j - j)! / (N - j)!, meaningful for N >= ell(lam)."""
    if n < lam.length:
        raise ValueError("factorial form needs N >= number of rows")
    return prod(
        (Fraction(factorial(n + lam[j - 1] - j), factorial(n - j)) for j in range(1, lam.length + 1)),
        start=Fraction(1),
    )


@lru_cache(maxsize=None)
def _f_sum_terms(lam: Partition) -> tuple[tuple[int, int], ...]:
    table = character_table(lam.weight)
    row = table.row(lam)
    return tuple((class_size(mu) * chi, mu.length) for chi, mu in zip(row, table.partitions) if chi)


def f_lambda_sum(lam: Partition, n: int) -> Fraction:
    """(1/dim V_lam) sum_mu g_mu chi^lam_mu N^{ell(mu)}."""
    if lam.weight == 0:
        return Fraction(1)
    total = sum(c * n**ell for c, ell in _f_sum_terms(lam))
    return Fraction(total, irrep_dimension(lam))


def all_f_values(m: int, n: int) -> dict[Partition, int]:
    return {lam: f_lambda_product(lam, n) for lam in enumerate_partitions(m)}
