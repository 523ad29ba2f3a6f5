"""Cumulants of X_N and the coefficients K_lambda(N).

Moments and cumulants are linked by the set-partition sums::

    mu_n    = sum_{lam |- n} c_lam kappa_lam
    kappa_n = sum_{lam |- n} (-1)^{ell-1} (ell-1)! c_lam mu_lam

with c_lam the number of set partitions of block sizes lam.  The even
cumulants are polynomials in the traces of (A A*)^j::

    kappa_2m = (2m-1)!! / (2 sigma^2)^m  sum_{lam |- m} g_lam K_lam(N) p_lam(nu^2)

where K_lam(N) is obtained from the Weingarten coefficients by peeling off
every non-trivial decomposition:  M_lam = sum_Lambda a_Lambda prod K_mu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from fractions import Fraction
from math import comb, factorial, prod

from .moments import MomentTable, SpectrumSpec, double_factorial, moment_table
from .partitions import (
    Partition,
    class_size,
    decompositions,
    enumerate_partitions,
    set_partition_count,
)
from .weingarten import weingarten_table


@dataclass(frozen=True)
class CumulantTable:
    """Even cumulants ``even[m] = kappa_{2m}``; ``even[0]`` is a 0 placeholder."""

    even: tuple[Fraction, ...]
    spec: SpectrumSpec | None = field(default=None, compare=False)

    @property
    def m_max(self) -> int:
        return len(self.even) - 1

    def kappa(self, n: int) -> Fraction:
        if n == 0 or n % 2:
            return Fraction(0)
        return self.even[n // 2]


def _kappa_sequence(mu: list[Fraction]) -> list[Fraction]:
    # kappa_n = mu_n - sum_{k=1}^{n-1} C(n-1, k-1) kappa_k mu_{n-k}
    kappa = [Fraction(0)] * len(mu)
    for n in range(1, len(mu)):
        kappa[n] = mu[n] - sum(
            (comb(n - 1, k - 1) * kappa[k] * mu[n - k] for k in range(1, n) if kappa[k] and mu[n - k]),
            Fraction(0),
        )
    return kappa


def _kappa_closed(mu: list[Fraction], n: int) -> Fraction:
    total = Fraction(0)
    for lam in enumerate_partitions(n):
        ell = lam.length
        term = prod((mu[p] for p in lam.parts), start=Fraction(1))
        if term:
            total += (-1) ** (ell - 1) * factorial(ell - 1) * set_partition_count(lam) * term
    return total


def cumulants_from_moments(moments: MomentTable, method: str = "recursion") -> CumulantTable:
    """Even cumulants from even moments; ``method`` is "recursion" or "closed"."""
    mu = moments.sequence()
    if mu[0] != 1:
        raise ValueError("moment table must start with mu_0 = 1")
    if method == "recursion":
        kappa = _kappa_sequence(mu)
    elif method == "closed":
        kappa = [Fraction(0)] + [_kappa_closed(mu, n) for n in range(1, len(mu))]
    else:
        raise ValueError(f"unknown method {method!r}")
    even = (Fraction(0),) + tuple(kappa[2 * m] for m in range(1, moments.m_max + 1))
    return CumulantTable(even, moments.spec)


def moments_from_cumulants(cumulants: CumulantTable) -> MomentTable:
    """mu_n = sum_{lam |- n} c_lam kappa_lam, for the even orders up to 2 m_max."""
    kap = [cumulants.kappa(n) for n in range(2 * cumulants.m_max + 1)]
    even = [Fraction(1)]
    for m in range(1, cumulants.m_max + 1):
        total = Fraction(0)
        for lam in enumerate_partitions(2 * m):
            term = prod((kap[p] for p in lam.parts), start=Fraction(1))
            if term:
                total += set_partition_count(lam) * term
        even.append(total)
    return MomentTable(tuple(even), cumulants.spec)


@dataclass(frozen=True)
class KCoefficients:
    """K_lam(N) for every lam of weight <= m at fixed N, with leading-order values."""

    n: int
    m: int
    values: dict[Partition, Fraction]
    leading: dict[Partition, Fraction]

    def __getitem__(self, lam: Partition) -> Fraction:
        return self.values[lam]


_k_cache: dict[tuple[int, int], KCoefficients] = {}


def k_coefficients(m: int, n: int) -> KCoefficients:
    """Invert M_lam = sum over decompositions a_Lambda prod K_mu, weight by weight.

    Every non-trivial decomposition only involves partitions of smaller
    weight, so K_lam = M_lam - (those products).
    """
    if m > n:
        raise ValueError(f"K-coefficients need m <= N (m={m}, N={n})")
    key = (m, n)
    if key in _k_cache:
        return _k_cache[key]
    values: dict[Partition, Fraction] = {}
    for j in range(1, m + 1):
        wg = weingarten_table(j, n)
        for lam in enumerate_partitions(j):
            rest = Fraction(0)
            for dec in decompositions(lam)[1:]:
                rest += dec.multiplicity * prod(
                    (values[mu] ** count for mu, count in dec.blocks), start=Fraction(1)
                )
            values[lam] = wg[lam] - rest
    leading = {lam: k_leading(lam, n) for lam in values}
    out = KCoefficients(n, m, values, leading)
    _k_cache[key] = out
    return out


def k_leading(lam: Partition, n: int) -> Fraction:
    """Leading large-N term of K_lam(N).

    (-1)^{m+ell} 2^ell N^{-2m-ell+2} (2m+ell-3)!/(2m)! prod_j ((2j-1)!/(j-1)!^2)^{r_j}
    """
    if n < 1:
        raise ValueError("N must be positive")
    m, ell = lam.weight, lam.length
    coeff = Fraction(factorial(2 * m + ell - 3), factorial(2 * m))
    for j, r in lam.frequencies.items():
        coeff *= Fraction(factorial(2 * j - 1), factorial(j - 1) ** 2) ** r
    return (-1) ** (m + ell) * 2**ell * coeff / Fraction(n) ** (2 * m + ell - 2)


def check_substitution(k: KCoefficients) -> bool:
    """Re-assemble every M_lam(N) from the K's through all decompositions."""
    for j in range(1, k.m + 1):
        wg = weingarten_table(j, k.n)
        for lam in enumerate_partitions(j):
            total = sum(
                (
                    dec.multiplicity * prod((k.values[mu] ** c for mu, c in dec.blocks), start=Fraction(1))
                    for dec in decompositions(lam)
                ),
                Fraction(0),
            )
            if total != wg[lam]:
                return False
    return True


def kappa_2m_partition_form(spec: SpectrumSpec, m: int) -> Fraction:
    """kappa_2m as a polynomial in the traces, through K_lam(N)."""
    if m < 1:
        raise ValueError("m must be positive")
    k = k_coefficients(m, spec.n)
    psums = {j: spec.power_sum(j) for j in range(1, m + 1)}
    total = Fraction(0)
    for lam in enumerate_partitions(m):
        p = prod((psums[j] ** r for j, r in lam.frequencies.items()), start=Fraction(1))
        total += class_size(lam) * k[lam] * p
    return double_factorial(2 * m - 1) * total / (2 * spec.sigma2) ** m


def _centred_trace(spec: SpectrumSpec, power: int) -> Fraction:
    # tr (A A* - 2 sigma^2 I)^power
    shift = 2 * spec.sigma2
    return sum(((v - shift) ** power for v in spec.nu2), Fraction(0))


def kappa_closed_form(spec: SpectrumSpec, order: int) -> Fraction:
    """kappa_2, kappa_4, kappa_6 in terms of the centred traces of A A*."""
    n = spec.n
    s2 = spec.sigma2
    if order == 2:
        return Fraction(1)
    if order == 4:
        if n < 2:
            raise ValueError("kappa_4 closed form needs N >= 2")
        return -3 * _centred_trace(spec, 2) / (4 * s2**2 * n**3 * (1 - Fraction(1, n * n)))
    if order == 6:
        if n < 3:
            raise ValueError("kappa_6 closed form needs N >= 3")
        den = 2 * n**5 * s2**3 * (1 - Fraction(1, n * n)) * (1 - Fraction(4, n * n))
        return 15 * _centred_trace(spec, 3) / den
    raise ValueError("closed forms exist for orders 2, 4 and 6 only")


def kappa_closed_form_as_printed(spec: SpectrumSpec, order: int) -> float:
    """The same expressions with sigma in place of sigma^2 in the shift and denominators.

    Kept only to demonstrate that this variant is wrong (it is not zero for
    the identity spectrum).
    """
    n = spec.n
    sigma = spec.sigma
    centred = [float(v) - 2 * sigma for v in spec.nu2]
    if order == 4:
        return -3 * sum(c * c for c in centred) / (4 * sigma**2 * n**3 * (1 - 1 / n**2))
    if order == 6:
        den = 2 * n**5 * sigma**3 * (1 - 1 / n**2) * (1 - 4 / n**2)
        return 15 * sum(c**3 for c in centred) / den
    raise ValueError("orders 4 and 6 only")


def cumulant_table(spec: SpectrumSpec, m_max: int, route: str = "samuel") -> CumulantTable:
    return cumulants_from_moments(moment_table(spec, m_max, route))


def k_recursion_experimental(m: int, n: int) -> dict[Partition, Fraction]:
    """Solve the quadratic K-recursion exactly as printed, distinguishing the last part.

    Experimental: the printed system has no source term, so it forces
    K_(1) = 0, contradicting K_(1) = M_(1) = 1/N.  Use :func:`k_coefficients`.
    """
    values: dict[Partition, Fraction] = {Partition(()): Fraction(1)}
    for j in range(1, m + 1):
        for lam in enumerate_partitions(j):
            parts = list(lam.parts)
            last, head = parts[-1], parts[:-1]
            acc = Fraction(0)
            for p in range(1, last):
                q = last - p
                acc += values.get(Partition(head[1:] + [p, q]), Fraction(0))
            for i, part in enumerate(head):
                merged = head[:i] + [part + last] + head[i + 1:]
                acc += part * values.get(Partition(merged), Fraction(0))
            k = len(head)
            for p in range(1, last):
                q = last - p
                for split in range(1, k):
                    weight = Fraction(1, factorial(split) * factorial(k - split - 1))
                    for perm in permutations(head):
                        left = Partition(list(perm[:split]) + [p])
                        right = Partition(list(perm[split:]) + [q])
                        acc += weight * values.get(left, Fraction(0)) * values.get(right, Fraction(0))
            values[lam] = -acc / n
    values.pop(Partition(()))
    return values

