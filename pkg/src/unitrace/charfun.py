"""The characteristic function psi_N(xi) = E exp(i xi X_N) and what is built on it.

Routes to psi_N:

``series``    sum_m (-1)^m (xi/2sigma)^{2m} I_N^m / (m!)^2 in exact rationals.
``bessel``    the determinant of nu_j^{k-1} J_{k-1}(xi nu_j / sigma) over the
              Vandermonde product of nu^2, in extended precision.
``toeplitz``  for A = c I: det[i^{j-k} J_{j-k}(xi c / sigma)] (Heine identity).
``rank1``     for a single non-zero singular value c: Gamma(N) (2/x)^{N-1} J_{N-1}(x)
              with x = xi c / sigma (the column of a Haar unitary is uniform
              on the complex sphere).
``cumulant``  exp of the truncated cumulant series, for small xi and large N.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import mpmath as mp
import numpy as np
from scipy import special

from .cumulants import cumulants_from_moments
from .moments import SpectrumSpec, moment, moment_table, normal_moment, trace_moment_integral

DEFAULT_DELTA = 0.5
DEFAULT_GAMMA = 2.5
DEGENERACY_TOL = 1e-6
# Landau: |J_n(x)| <= LANDAU_C x^{-1/3} for every order n >= 0 and x > 0.
LANDAU_C = 0.7858
NORMAL_PEAK = 1 / math.sqrt(2 * math.pi)
SERIES_M = 30
CUMULANT_M = 8


class NearDegenerateError(ValueError):
    """Singular values too close (or zero) for the Bessel determinant."""


class CharFunDomainError(ValueError):
    pass


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PsiValue:
    value: float
    error: float
    route: str
    dps: int | None = None
    truncated: bool = False
    exact: object = field(default=None, repr=False, compare=False)


def psi_normal(xi: float) -> float:
    return math.exp(-xi * xi / 2)


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _mpf(q: Fraction) -> mp.mpf:
    return mp.mpf(q.numerator) / q.denominator


def _moment_route(spec: SpectrumSpec, m: int) -> str:
    return "samuel" if m <= spec.n else "schur"


def _series_terms(spec: SpectrumSpec, xi: Fraction, m_max: int) -> list[Fraction]:
    z = xi * xi / (4 * spec.sigma2)
    return [
        (-1) ** m * z**m * trace_moment_integral(spec, m, _moment_route(spec, m)) / factorial(m) ** 2
        for m in range(m_max + 1)
    ]


def _series_tail(spec: SpectrumSpec, xi: float, m_max: int, next_term: Fraction) -> float:
    # I^{m+1} <= alpha^2 sigma^2 I^m, so after the first omitted term the
    # magnitudes shrink at least geometrically with ratio q once q < 1.
    q = xi * xi * spec.alpha**2 / (4 * (m_max + 2) ** 2)
    if q >= 1:
        return math.inf
    return abs(float(next_term)) / (1 - q)


def psi_series(spec: SpectrumSpec, xi, m_max: int, tol: float | None = None) -> PsiValue:
    """Partial sum through m_max; error bounds the whole tail.

    Orders m > N use the Schur form of the moment integral.
    """
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    if xi == 0:
        return PsiValue(1.0, 0.0, "series", exact=Fraction(1))
    xq = _q(abs(xi))
    terms = _series_terms(spec, xq, m_max + 1)
    total = sum(terms[:-1], Fraction(0))
    err = _series_tail(spec, float(xq), m_max, terms[-1])
    truncated = tol is not None and err > tol
    if truncated:
        warnings.warn(f"psi_series truncation error {err:.3g} exceeds {tol:.3g}", TruncationWarning)
    return PsiValue(float(total), err, "series", truncated=truncated, exact=total)


def psi_series_difference(spec: SpectrumSpec, xi, m_max: int) -> tuple[float, float]:
    """psi_N - psi summed term by term from the moment differences, with tail bound."""
    xq = _q(abs(xi))
    x2 = xq * xq
    diff = Fraction(0)
    for m in range(1, m_max + 1):
        mu = moment_table_entry(spec, m)
        if mu != normal_moment(2 * m):
            diff += (-1) ** m * x2**m * (mu - normal_moment(2 * m)) / factorial(2 * m)
    nxt = _series_terms(spec, xq, m_max + 1)[-1]
    tail = _series_tail(spec, float(xq), m_max, nxt)
    # the Gaussian's own tail after m_max
    g = float(x2 / 2) ** (m_max + 1) / factorial(m_max + 1)
    return float(diff), tail + g


def moment_table_entry(spec: SpectrumSpec, m: int) -> Fraction:
    return moment(spec, 2 * m, _moment_route(spec, m))


def _check_bessel_spectrum(spec: SpectrumSpec, gap_tol: float) -> None:
    nu2 = spec.nu2
    if nu2[0] == 0:
        raise NearDegenerateError("A_N is singular (zero singular value)")
    scale = float(nu2[-1])
    gaps = [float(b - a) / scale for a, b in zip(nu2, nu2[1:])]
    if gaps and min(gaps) < gap_tol:
        raise NearDegenerateError(f"relative gap {min(gaps):.3g} below tolerance {gap_tol:g}")


def _bessel_det(spec: SpectrumSpec, xi: mp.mpf) -> tuple[mp.mpf, mp.mpf]:
    n = spec.n
    sigma = mp.sqrt(_mpf(spec.sigma2))
    nu = [mp.sqrt(_mpf(v)) for v in spec.nu2]
    mat = mp.matrix(n, n)
    hadamard = mp.mpf(1)
    for j in range(n):
        arg = xi * nu[j] / sigma
        row = [nu[j] ** k * mp.besselj(k, arg) for k in range(n)]
        for k, v in enumerate(row):
            mat[j, k] = v
        hadamard *= mp.sqrt(mp.fsum(v * v for v in row))
    return mp.det(mat), hadamard


def _vandermonde(spec: SpectrumSpec) -> Fraction:
    v = Fraction(1)
    nu2 = spec.nu2
    for j in range(len(nu2)):
        for k in range(j + 1, len(nu2)):
            v *= nu2[k] - nu2[j]
    return v


def _psi_bessel_mp(spec: SpectrumSpec, xi: float, rel_tol: float, gap_tol: float, max_dps: int):
    _check_bessel_spectrum(spec, gap_tol)
    n = spec.n
    vand = _vandermonde(spec)
    target = max(15, int(-math.log10(rel_tol)) + 2)
    dps = 30
    prev = None
    while dps <= max_dps:
        with mp.workdps(dps):
            x = mp.mpf(xi)
            sigma = mp.sqrt(_mpf(spec.sigma2))
            det, hadamard = _bessel_det(spec, x)
            pref = (2 * sigma / x) ** (n * (n - 1) // 2) * mp.fprod(mp.factorial(j) for j in range(1, n))
            if det == 0:
                # total cancellation at this precision
                prev, dps = None, 2 * dps
                continue
            val = pref * det / _mpf(vand)
            if prev is not None and abs(val - prev) <= mp.mpf(10) ** (-target) * abs(val):
                return +val, dps
            loss = max(0, int(mp.log10(hadamard / abs(det))) + 1)
            prev = val
            dps = max(2 * dps, loss + target + 15)
    raise ArithmeticError(f"Bessel determinant did not stabilise below {max_dps} digits")


def psi_bessel(
    spec: SpectrumSpec,
    xi: float,
    rel_tol: float = 1e-15,
    gap_tol: float = DEGENERACY_TOL,
    max_dps: int = 4000,
) -> PsiValue:
    """Closed-form Bessel determinant, precision escalated until stable."""
    if xi == 0:
        return PsiValue(1.0, 0.0, "bessel", dps=0)
    val, dps = _psi_bessel_mp(spec, abs(float(xi)), rel_tol, gap_tol, max_dps)
    v = float(val)
    return PsiValue(v, abs(v) * rel_tol, "bessel", dps=dps, exact=val)


def psi_toeplitz(spec: SpectrumSpec, xi: float, rel_tol: float = 1e-15) -> PsiValue:
    """Heine/Toeplitz determinant for scalar A = c I (all singular values equal)."""
    if len(set(spec.nu2)) != 1:
        raise CharFunDomainError("Toeplitz route needs a scalar matrix A = c I")
    if xi == 0:
        return PsiValue(1.0, 0.0, "toeplitz", dps=0)
    n = spec.n
    s = abs(float(xi)) * math.sqrt(float(spec.nu2[0]) / float(spec.sigma2))
    dps = 30
    prev = None
    while True:
        with mp.workdps(dps):
            coeff = {d: (mp.mpc(0, 1) ** d) * mp.besselj(d, s) for d in range(-(n - 1), n)}
            mat = mp.matrix(n, n)
            for j in range(n):
                for k in range(n):
                    mat[j, k] = coeff[j - k]
            val = mp.re(mp.det(mat))
            if prev is not None and abs(val - prev) <= mp.mpf(10) ** (-17) * abs(val):
                return PsiValue(float(val), abs(float(val)) * rel_tol, "toeplitz", dps=dps, exact=+val)
            prev = val
            dps *= 2
            if dps > 4000:
                raise ArithmeticError("Toeplitz determinant did not stabilise")


def _is_rank_one(spec: SpectrumSpec) -> bool:
    return spec.n >= 2 and sum(1 for v in spec.nu2 if v) == 1


def psi_rank_one(spec: SpectrumSpec, xi: float, rel_tol: float = 1e-15) -> PsiValue:
    """Exact psi_N for A of rank one."""
    if not _is_rank_one(spec):
        raise CharFunDomainError("rank-one route needs exactly one non-zero singular value and N >= 2")
    if xi == 0:
        return PsiValue(1.0, 0.0, "rank1", dps=0)
    n = spec.n
    with mp.workdps(30):
        x = abs(mp.mpf(xi)) * mp.sqrt(_mpf(spec.nu2[-1] / spec.sigma2))
        val = mp.gamma(n) * (2 / x) ** (n - 1) * mp.besselj(n - 1, x)
    return PsiValue(float(val), abs(float(val)) * rel_tol, "rank1", dps=30, exact=+val)


def log_psi_cumulant(spec: SpectrumSpec, xi: float, m_max: int) -> tuple[float, float]:
    """Truncated sum_{m>=2} (-1)^m kappa_2m xi^2m / (2m)! (the non-Gaussian part of log psi_N).

    The error is the size of the last retained term, a heuristic: the series
    only converges inside the zero-free disc of psi_N.
    """
    kappas = _cumulants(spec, m_max)
    x2 = xi * xi
    terms = [(-1) ** m * float(kappas[m]) * x2**m / math.factorial(2 * m) for m in range(2, m_max + 1)]
    # last two terms, since symmetric spectra can make every other cumulant vanish
    return math.fsum(terms), max((abs(t) for t in terms[-2:]), default=0.0)


_cum_cache: dict[tuple[SpectrumSpec, int], tuple[Fraction, ...]] = {}


def _cumulants(spec: SpectrumSpec, m_max: int) -> tuple[Fraction, ...]:
    key = (spec, m_max)
    if key not in _cum_cache:
        route = "samuel" if m_max <= spec.n else "schur"
        _cum_cache[key] = cumulants_from_moments(moment_table(spec, m_max, route)).even
    return _cum_cache[key]


def psi_cumulant(spec: SpectrumSpec, xi: float, m_max: int = CUMULANT_M) -> PsiValue:
    if xi == 0:
        return PsiValue(1.0, 0.0, "cumulant")
    r, err = log_psi_cumulant(spec, xi, m_max)
    g = psi_normal(xi)
    return PsiValue(g * math.exp(r), g * math.exp(r) * abs(math.expm1(err)), "cumulant")


BESSEL_MAX_N = 20
CUMULANT_MIN_N = 12


def auto_route(spec: SpectrumSpec) -> str:
    """toeplitz for A = c I; bessel for distinct nu when N <= 20; cumulant for
    large N (the determinant gets slow); series otherwise."""
    if len(set(spec.nu2)) == 1:
        return "toeplitz"
    if _is_rank_one(spec):
        return "rank1"
    try:
        _check_bessel_spectrum(spec, DEGENERACY_TOL)
        admissible = True
    except NearDegenerateError:
        admissible = False
    if admissible and spec.n <= BESSEL_MAX_N:
        return "bessel"
    if spec.n >= CUMULANT_MIN_N:
        return "cumulant"
    return "series"


def psi_n(spec: SpectrumSpec, xi: float, route: str = "auto", **kw) -> PsiValue:
    """Dispatch to a route; "auto" prefers closed forms over series."""
    if xi == 0:
        return PsiValue(1.0, 0.0, "exact")
    if route == "auto":
        route = auto_route(spec)
    if route == "toeplitz":
        return psi_toeplitz(spec, xi)
    if route == "bessel":
        return psi_bessel(spec, xi, **kw)
    if route == "rank1":
        return psi_rank_one(spec, xi)
    if route == "series":
        return psi_series(spec, xi, kw.get("m_max", max(spec.n, SERIES_M)), kw.get("tol"))
    if route == "cumulant":
        return psi_cumulant(spec, xi, kw.get("m_max", CUMULANT_M))
    raise ValueError(f"unknown route {route!r}")


def be_ratio(
    spec: SpectrumSpec,
    xi: float,
    delta: float = DEFAULT_DELTA,
    route: str = "auto",
    m_max: int | None = None,
) -> float:
    """|psi_N - psi| N^{2-b} / (xi^4 e^{-xi^2/2}) on 0 < xi < delta N^{(1-b)/2}."""
    n, b = spec.n, float(spec.b)
    limit = delta * n ** ((1 - b) / 2)
    if not 0 < xi < limit:
        raise CharFunDomainError(f"xi={xi} outside (0, {limit:.4g}) for delta={delta}")
    scale = n ** (2 - b) / (xi**4 * math.exp(-xi * xi / 2))
    if not math.isfinite(scale):
        raise CharFunDomainError("xi^4 e^{-xi^2/2} underflows")
    return abs(psi_difference(spec, xi, route, m_max)) * scale


def psi_difference(spec: SpectrumSpec, xi: float, route: str = "auto", m_max: int | None = None) -> float:
    """psi_N(xi) - e^{-xi^2/2}, computed without cancellation."""
    return psi_difference_with_error(spec, xi, route, m_max)[0]


def psi_difference_with_error(
    spec: SpectrumSpec, xi: float, route: str = "auto", m_max: int | None = None
) -> tuple[float, float]:
    if route == "auto":
        route = auto_route(spec)
    if route == "series":
        return psi_series_difference(spec, xi, m_max or SERIES_M)
    if route == "cumulant":
        r, err = log_psi_cumulant(spec, xi, m_max or CUMULANT_M)
        g = psi_normal(xi)
        return g * math.expm1(r), g * math.exp(r) * abs(math.expm1(err))
    val = psi_n(spec, xi, route)
    with mp.workdps(40):
        return float(val.exact - mp.exp(-mp.mpf(xi) ** 2 / 2)), val.error


@dataclass(frozen=True)
class CharFunEval:
    """psi_N on a grid with the normal reference, BE ratios and error estimates."""

    spec: SpectrumSpec
    xi: tuple[float, ...]
    psi: tuple[float, ...]
    errors: tuple[float, ...]
    routes: tuple[str, ...]
    ratio: tuple[float | None, ...]

    def rows(self) -> list[dict]:
        return [
            {"xi": x, "psi_N": p, "psi": psi_normal(x), "ratio": r, "error_bound": e, "route": rt}
            for x, p, e, rt, r in zip(self.xi, self.psi, self.errors, self.routes, self.ratio)
        ]

    def to_csv(self, path) -> None:
        rows = self.rows()
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            for row in rows:
                w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


def evaluate_grid(spec: SpectrumSpec, xis: Iterable[float], route: str = "auto", delta: float = DEFAULT_DELTA) -> CharFunEval:
    xs, ps, es, rs, ratios = [], [], [], [], []
    for x in xis:
        v = psi_n(spec, x, route)
        xs.append(float(x))
        ps.append(v.value)
        es.append(v.error)
        rs.append(v.route)
        try:
            ratios.append(be_ratio(spec, x, delta) if x else None)
        except CharFunDomainError:
            ratios.append(None)
    return CharFunEval(spec, tuple(xs), tuple(ps), tuple(es), tuple(rs), tuple(ratios))


def psi_abs_bound(spec: SpectrumSpec, xi: float) -> float:
    """Hadamard + Landau bound on |psi_N(xi)|, usable for any xi > 0 and nu_1 > 0.

    For rank-one A the closed form gives Gamma(N) 2^{N-1} C x^{-(N-1)-1/3} directly.
    """
    n = spec.n
    if _is_rank_one(spec):
        x = xi * math.sqrt(float(spec.nu2[-1] / spec.sigma2))
        log_b = math.lgamma(n) + (n - 1) * math.log(2 / x) + math.log(LANDAU_C) - math.log(x) / 3
        return math.exp(min(0.0, log_b))
    sigma = spec.sigma
    nu = spec.nu
    log_b = (n * (n - 1) / 2) * math.log(2 * sigma / xi)
    log_b += sum(math.lgamma(j + 1) for j in range(1, n))
    log_b -= math.log(abs(float(_vandermonde(spec)))) if n > 1 else 0.0
    for v in nu:
        row = math.sqrt(sum(v ** (2 * k) for k in range(n)))
        log_b += math.log(row) + math.log(min(1.0, LANDAU_C * (xi * v / sigma) ** (-1 / 3)))
    return math.exp(min(0.0, log_b))


def psi_tail_integral_bound(spec: SpectrumSpec, x0: float) -> float:
    """Upper bound on int_{x0}^inf |psi_N| from the xi^{-p} decay of :func:`psi_abs_bound`."""
    n = spec.n
    p = n - 2 / 3 if _is_rank_one(spec) else n * (n - 1) / 2 + n / 3
    if p <= 1:
        return math.inf
    b = psi_abs_bound(spec, x0)
    if b >= 1.0:
        return math.inf
    return b * x0 / (p - 1)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _gl_panels(a: float, b: float, width: float):
    k = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, k + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = (hi - lo) / 2
        yield lo + half * (_GL_X + 1), half * _GL_W


@dataclass(frozen=True)
class DensityResult:
    """Tabulated inversion; ``error`` bounds the pointwise effect of psi errors,
    ``tail`` the truncation at xi_max (rigorous only when ``rigorous_tail``)."""

    x: np.ndarray
    f: np.ndarray
    xi_max: float
    tail: float
    error: float
    route: str
    rigorous_tail: bool


def grid_route(spec: SpectrumSpec, route: str = "auto") -> str:
    """Route for many-point evaluations: the cumulant series once N >= 12."""
    if route != "auto":
        return route
    if len(set(spec.nu2)) > 1 and not _is_rank_one(spec) and spec.n >= CUMULANT_MIN_N:
        return "cumulant"
    return auto_route(spec)


def _choose_xi_max(spec: SpectrumSpec, route: str, tol: float) -> tuple[float, float, bool]:
    # Past sqrt(2 log(1/tol)) the Gaussian part is below tol; for the Bessel
    # route the Landau bound then certifies the rest of psi_N's tail.
    x = math.sqrt(2 * math.log(1 / tol)) + 1
    if route in ("bessel", "rank1"):
        tail = psi_tail_integral_bound(spec, x)
        while tail > tol and x < 200:
            x *= 1.25
            tail = psi_tail_integral_bound(spec, x)
        return x, tail, True
    return x, gaussian_tail_integral(x), False


def _invert(spec, x, route, xi_max, tol, difference: bool) -> DensityResult:
    if spec.n < 2:
        raise CharFunDomainError("N=1 has an unbounded arcsine density; no inversion")
    route = grid_route(spec, route)
    if xi_max is None:
        xi_max, tail, rigorous = _choose_xi_max(spec, route, tol)
    else:
        rigorous = route in ("bessel", "rank1")
        tail = psi_tail_integral_bound(spec, xi_max) if rigorous else gaussian_tail_integral(xi_max)
    xg = np.asarray(x, dtype=float)
    nodes, weights, vals, errs = [], [], [], []
    for xs, ws in _gl_panels(0.0, xi_max, 0.25):
        for xi in xs:
            if difference:
                v, e = psi_difference_with_error(spec, float(xi), route)
            else:
                pv = psi_n(spec, float(xi), route)
                v, e = pv.value, pv.error
            vals.append(v)
            errs.append(e)
        nodes.append(xs)
        weights.append(ws)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    vals = np.array(vals)
    wv = weights * vals
    f = np.concatenate([np.cos(np.outer(xc, nodes)) @ wv for xc in np.array_split(xg.ravel(), max(1, xg.size // 256))])
    f = f.reshape(xg.shape) / math.pi
    err = float(np.dot(weights, np.array(errs))) / math.pi
    return DensityResult(xg, f, xi_max, tail / math.pi, err, route, rigorous)


def density_from_psi(
    spec: SpectrumSpec,
    x: Sequence[float],
    route: str = "auto",
    xi_max: float | None = None,
    tol: float = 1e-10,
) -> DensityResult:
    """f_N(x) = (1/pi) int_0^inf psi_N(xi) cos(x xi) dxi, truncated at xi_max."""
    return _invert(spec, x, route, xi_max, tol, difference=False)


def density_difference(
    spec: SpectrumSpec,
    x: Sequence[float],
    route: str = "auto",
    xi_max: float | None = None,
    tol: float = 1e-12,
) -> DensityResult:
    """f_N(x) - phi(x) by inverting psi_N - psi directly (no cancellation)."""
    return _invert(spec, x, route, xi_max, tol, difference=True)


def gaussian_tail_integral(a: float, b: float = math.inf) -> float:
    """int_a^b e^{-xi^2/2} dxi = sqrt(pi/2) (erfc(a/sqrt2) - erfc(b/sqrt2))."""
    hi = 0.0 if math.isinf(b) else special.erfc(b / math.sqrt(2))
    return math.sqrt(math.pi / 2) * (special.erfc(a / math.sqrt(2)) - hi)


def erfc_scaled_bounds(t: float) -> tuple[float, float, float]:
    """(lower, e^{t^2} int_t^inf e^{-x^2} dx, upper) for t >= 0."""
    value = math.sqrt(math.pi) / 2 * special.erfcx(t)
    return 1 / (t + math.sqrt(t * t + 2)), value, 1 / (t + math.sqrt(t * t + 4 / math.pi))


@dataclass(frozen=True)
class UpperBound:
    """The four terms of the smoothing-inequality bound on e(N) and their sum."""

    n: int
    delta: float
    gamma: float
    s_n: float
    t_n: float
    c_hat: float
    terms: tuple[float, float, float, float]
    degraded: bool

    @property
    def total(self) -> float:
        return math.fsum(self.terms)


def sup_be_ratio(spec: SpectrumSpec, s_n: float, points: int = 48, route: str = "auto") -> float:
    """Grid supremum of be_ratio over (0, s_n]; the grid skips the excluded endpoint."""
    grid = np.linspace(s_n / points, s_n * (1 - 1e-9), points)
    delta = s_n / spec.n ** ((1 - float(spec.b)) / 2) * (1 + 1e-6)
    return max(be_ratio(spec, float(x), delta, route) for x in grid)


def kolmogorov_upper_bound(
    spec: SpectrumSpec,
    delta: float = DEFAULT_DELTA,
    gamma: float = DEFAULT_GAMMA,
    points: int = 48,
    rel_stop: float = 1e-3,
) -> UpperBound:
    """e(N) <= term1 + term2 + term3 + term4 with an empirical Berry-Esseen constant.

    term1  2C/(pi N^{2-b}) int_0^S xi^3 e^{-xi^2/2}
    term2  2/(pi S) int_S^T e^{-xi^2/2}
    term3  2/(pi S) int_S^T |psi_N|   (quadrature, then the Landau tail bound)
    term4  24 / (sqrt(2 pi^3) T)
    with S = delta N^{(1-b)/2} and T = N^gamma.
    """
    if gamma <= 2:
        raise ValueError("gamma must exceed 2")
    n, b = spec.n, float(spec.b)
    s_n = delta * n ** ((1 - b) / 2)
    t_n = float(n) ** gamma
    c_hat = sup_be_ratio(spec, s_n, points)
    t1 = 2 * c_hat / (math.pi * n ** (2 - b)) * (2 - (s_n * s_n + 2) * math.exp(-s_n * s_n / 2))
    t2 = 2 / (math.pi * s_n) * gaussian_tail_integral(s_n, t_n)
    t4 = 24 / (math.sqrt(2 * math.pi**3) * t_n)
    degraded = False
    try:
        _check_bessel_spectrum(spec, DEGENERACY_TOL)
        integral = _abs_psi_integral(spec, s_n, t_n, rel_stop * (t1 + t2 + t4))
    except NearDegenerateError:
        integral = t_n - s_n
        degraded = True
    t3 = 2 / (math.pi * s_n) * integral
    return UpperBound(n, delta, gamma, s_n, t_n, c_hat, (t1, t2, t3, t4), degraded)


def _abs_psi_integral(spec: SpectrumSpec, a: float, b: float, target: float) -> float:
    """int_a^b |psi_N|: panel quadrature until the rigorous tail bound drops below target."""
    total = 0.0
    lo = a
    width = 2.0
    while lo < b:
        tail = psi_tail_integral_bound(spec, lo)
        if tail <= target:
            return total + tail
        hi = min(b, lo + width)
        half = (hi - lo) / 2
        xs = lo + half * (_GL_X + 1)
        vals = np.array([abs(psi_bessel(spec, float(x)).value) for x in xs])
        total += half * float(np.dot(_GL_W, vals))
        lo = hi
    return total
