"""Spectra of A_N and the exact moments of X_N = Re tr(A_N U) / sigma.

The law of X_N depends on A_N only through its singular values, so a
:class:`SpectrumSpec` stores just the squared singular values ``nu2`` (exact
rationals; the singular values themselves may be irrational, e.g. sqrt(2N)).

Two routes to ``I_N^m = E|tr A U|^{2m}``:

``"samuel"``
    ``m! sum_lam g_lam M_lam(N) p_lam(nu^2)``, valid for ``m <= N``.
``"schur"``
    ``m! sum_{mu, ell(mu) <= N} dim V_mu s_mu(nu^2) / f_mu(N)``.  Rows longer
    than N drop out because s_mu vanishes on N variables, which makes this
    form valid for every m; it is what the characteristic-function series
    uses beyond m = N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Any, Mapping, Sequence

import numpy as np

from .partitions import (
    Partition,
    class_size,
    enumerate_partitions,
    irrep_dimension,
    partitions_with_max_length,
)
from .symfun import complete_homogeneous, f_lambda_product, power_sum, schur_jacobi_trudi
from .weingarten import weingarten_table

FAMILIES = ("identity", "explicit", "spike", "random", "ramp", "sparse")


class MomentDomainError(ValueError):
    """Requested moment order lies outside the validity range of the formula."""


@dataclass(frozen=True)
class SpectrumSpec:
    """Squared singular values of A_N (non-decreasing) plus declared growth (b, k)."""

    nu2: tuple[Fraction, ...]
    b: Fraction = Fraction(0)
    k: Fraction = Fraction(1)
    family: str = "explicit"

    def __post_init__(self):
        nu2 = tuple(sorted(Fraction(v) for v in self.nu2))
        if not nu2:
            raise ValueError("spectrum needs N >= 1 singular values")
        if nu2[0] < 0:
            raise ValueError("squared singular values must be non-negative")
        if sum(nu2) == 0:
            raise ValueError("spectrum has zero total mass")
        object.__setattr__(self, "nu2", nu2)
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "k", Fraction(self.k))
        if not 0 <= self.b <= 1:
            raise ValueError("b must lie in [0, 1]")
        if self.k <= 0:
            raise ValueError("k must be positive")

    @property
    def n(self) -> int:
        return len(self.nu2)

    @property
    def sigma2(self) -> Fraction:
        """tr(A A*) / (2N)."""
        return sum(self.nu2, Fraction(0)) / (2 * self.n)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def nu(self) -> np.ndarray:
        return np.sqrt(np.array([float(v) for v in self.nu2]))

    @property
    def alpha(self) -> float:
        """Support radius of X_N: max |tr A U| / sigma = sum(nu) / sigma."""
        return float(self.nu.sum()) / self.sigma

    def satisfies_growth(self) -> bool:
        """nu_N^2 <= k N^b at this N."""
        if self.b.denominator == 1:
            return self.nu2[-1] <= self.k * self.n ** int(self.b)
        return float(self.nu2[-1]) <= float(self.k) * self.n ** float(self.b) * (1 + 1e-12)

    def power_sum(self, j: int) -> Fraction:
        """tr (A A*)^j."""
        return power_sum(j, self.nu2)

    def describe(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "N": self.n,
            "nu2": [str(v) for v in self.nu2],
            "sigma2": str(self.sigma2),
            "b": str(self.b),
            "k": str(self.k),
            "alpha": self.alpha,
        }


def make_spectrum(family: str | Mapping[str, Any], n: int) -> SpectrumSpec:
    """Build a validated spectrum for one member of a family at size ``n``.

    ``family`` is a kind name or a mapping with key ``kind`` and optional
    ``values`` (explicit singular values; ``squared: true`` to pass nu^2
    directly), ``seed`` (random), ``fraction`` (sparse), and ``b``/``k``
    overrides.

    identity  nu = (1, ..., 1); b=0, k=1
    spike     nu = (0, ..., 0, sqrt(2N)); b=1, k=2
    random    nu^2 uniform on the grid {1/1000, ..., 2}, seeded; b=0, k=2
    ramp      nu^2 = (N + j - 1)/N, j = 1..N (distinct, in [1, 2)); b=0, k=2
    sparse    nu^2 = 4 on the top round(N * fraction) entries (default 1/4),
              0 elsewhere; b=0, k=4
    explicit  given values; b=0 and k=max(nu^2) unless overridden
    """
    desc = {"kind": family} if isinstance(family, str) else dict(family)
    kind = desc.get("kind")
    if kind not in FAMILIES:
        raise ValueError(f"unknown spectrum family {kind!r}; expected one of {FAMILIES}")
    if n < 1:
        raise ValueError("N must be positive")
    if kind == "identity":
        nu2, b, k = [Fraction(1)] * n, 0, 1
    elif kind == "spike":
        nu2, b, k = [Fraction(0)] * (n - 1) + [Fraction(2 * n)], 1, 2
    elif kind == "random":
        rng = np.random.default_rng(desc.get("seed", 0))
        nu2 = [Fraction(int(v), 1000) for v in rng.integers(1, 2001, size=n)]
        b, k = 0, 2
    elif kind == "ramp":
        nu2, b, k = [Fraction(n + j, n) for j in range(n)], 0, 2
    elif kind == "sparse":
        frac = Fraction(desc.get("fraction", Fraction(1, 4)))
        rank = max(1, round(n * frac))
        nu2, b, k = [Fraction(0)] * (n - rank) + [Fraction(4)] * rank, 0, 4
    else:
        values = desc.get("values")
        if values is None or len(values) != n:
            raise ValueError(f"explicit family needs exactly N={n} values")
        vals = [Fraction(str(v)) if isinstance(v, float) else Fraction(v) for v in values]
        if any(v < 0 for v in vals):
            raise ValueError("negative singular value")
        nu2 = vals if desc.get("squared") else [v * v for v in vals]
        b, k = 0, max(nu2)
    b = desc.get("b", b)
    k = desc.get("k", k)
    spec = SpectrumSpec(tuple(nu2), Fraction(b), Fraction(k) if k else Fraction(1), kind)
    if not spec.satisfies_growth():
        raise ValueError(f"declared growth violated: nu_N^2={spec.nu2[-1]} > k N^b at N={n}")
    return spec


def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def normal_moment(order: int) -> int:
    """E Z^order for Z ~ N(0, 1): (order-1)!! for even order, 0 otherwise."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return 0 if order % 2 else double_factorial(order - 1)


def trace_moment_integral(spec: SpectrumSpec, m: int, route: str = "samuel") -> Fraction:
    """I_N^m(A) = E |tr A U|^{2m} exactly."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return Fraction(1)
    if route == "samuel":
        return _samuel(spec, m)
    if route == "schur":
        return _schur(spec, m)
    raise ValueError(f"unknown route {route!r}")


@lru_cache(maxsize=4096)
def _samuel(spec: SpectrumSpec, m: int) -> Fraction:
    if m > spec.n:
        raise MomentDomainError(
            f"Weingarten sum is correct only for m <= N (m={m}, N={spec.n}); use route='schur'"
        )
    wg = weingarten_table(m, spec.n)
    psums = {j: spec.power_sum(j) for j in range(1, m + 1)}
    total = Fraction(0)
    for lam in enumerate_partitions(m):
        p = prod((psums[j] ** r for j, r in lam.frequencies.items()), start=Fraction(1))
        total += class_size(lam) * wg[lam] * p
    return factorial(m) * total


@lru_cache(maxsize=4096)
def _schur(spec: SpectrumSpec, m: int) -> Fraction:
    h = _homogeneous(spec, m)
    total = Fraction(0)
    for mu in partitions_with_max_length(m, spec.n):
        s = schur_jacobi_trudi(mu, spec.nu2, h)
        if s:
            total += Fraction(irrep_dimension(mu), f_lambda_product(mu, spec.n)) * s
    return factorial(m) * total


_h_cache: dict[SpectrumSpec, list[Fraction]] = {}


def _homogeneous(spec: SpectrumSpec, m: int) -> list[Fraction]:
    h = _h_cache.get(spec)
    if h is None or len(h) <= m:
        h = complete_homogeneous(spec.nu2, max(m, 2 * len(h) if h else m))
        _h_cache[spec] = h
    return h


def moment(spec: SpectrumSpec, order: int, route: str = "samuel") -> Fraction:
    """mu_order = E X_N^order; odd orders vanish."""
    if order < 0:
        raise ValueError("order must be non-negative")
    if order % 2:
        return Fraction(0)
    m = order // 2
    integral = trace_moment_integral(spec, m, route)
    return double_factorial(2 * m - 1) * integral / (factorial(m) * (2 * spec.sigma2) ** m)


@dataclass(frozen=True)
class MomentTable:
    """Even moments ``even[m] = mu_{2m}`` for m = 0..m_max."""

    even: tuple[Fraction, ...]
    spec: SpectrumSpec | None = field(default=None, compare=False)

    @property
    def m_max(self) -> int:
        return len(self.even) - 1

    def mu(self, n: int) -> Fraction:
        if n % 2:
            return Fraction(0)
        return self.even[n // 2]

    def sequence(self) -> list[Fraction]:
        """mu_0, mu_1, ..., mu_{2 m_max} including the zero odd moments."""
        return [self.mu(n) for n in range(2 * self.m_max + 1)]


def moment_table(spec: SpectrumSpec, m_max: int, route: str = "samuel") -> MomentTable:
    if route == "samuel" and m_max > spec.n:
        raise MomentDomainError(f"m_max={m_max} exceeds N={spec.n}")
    return MomentTable(tuple(moment(spec, 2 * m, route) for m in range(m_max + 1)), spec)


def moment_growth_bound(spec: SpectrumSpec, m: int) -> Fraction:
    """(nu_max^2 / (2 sigma^2))^m (2m-1)!!, an upper bound on mu_{2m}.

    Holds because s_lam(x) <= max(x)^m s_lam(1^N) for non-negative x.
    """
    return (spec.nu2[-1] / (2 * spec.sigma2)) ** m * double_factorial(2 * m - 1)


def declared_moment_bound(spec: SpectrumSpec, m: int) -> float:
    """(k N^b / (2 sigma^2))^m (2m-1)!! using the declared growth constants."""
    scale = float(spec.k) * spec.n ** float(spec.b) / float(2 * spec.sigma2)
    return scale**m * double_factorial(2 * m - 1)


def exact_str(values: Sequence[Fraction]) -> list[str]:
    return [str(v) for v in values]
