"""The bump kernel chi_eps and its Fourier transform.

chi_eps(x) = exp(-1/(1 - (x/eps)^2)) / (g eps) on (-eps, eps), zero outside,
with g the integral of exp(-1/(1-x^2)) over (-1, 1).  Since
chi_hat_eps(xi) = chi_hat_1(eps xi), everything reduces to eps = 1.

The transform decays like exp(-sqrt(w)) while the integrand is O(1), so
the quadrature loses about sqrt(w)/2.3 decimal digits to cancellation; it
runs in mpmath with that many guard digits.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy import integrate, optimize

ASYMPTOTIC_GUARD = 25.0


def _profile(x):
    return math.exp(-1.0 / (1.0 - x * x)) if abs(x) < 1 else 0.0


@lru_cache(maxsize=1)
def bump_norm_constant() -> float:
    """g = int_{-1}^{1} exp(-1/(1-x^2)) dx."""
    val, _ = integrate.quad(_profile, 0, 1, epsabs=0, epsrel=1e-13, limit=200)
    return 2 * val


def bump(x, eps: float):
    """chi_eps(x); accepts scalars or arrays."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    u = np.asarray(x, dtype=float) / eps
    inside = np.abs(u) < 1
    out = np.zeros_like(u)
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2)) / (bump_norm_constant() * eps)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BumpKernel:
    eps: float

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @property
    def g(self) -> float:
        return bump_norm_constant()

    def __call__(self, x):
        return bump(x, self.eps)

    def ft(self, xi: float) -> float:
        return bump_ft_numeric(xi, self.eps)


def bump_ft_numeric(xi: float, eps: float = 1.0) -> float:
    """chi_hat_eps(xi) = (2/g) int_0^1 cos(eps xi x) exp(-1/(1-x^2)) dx.

    Gauss-Legendre panels no wider than a quarter period, extended precision.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    w = abs(eps * xi)
    if w == 0:
        return 1.0
    dps = 20 + int(math.sqrt(w) / 2.3)
    with mp.workdps(dps):
        g = _g_mp()
        panels = max(1, math.ceil(w / (math.pi / 2)))
        pts = [mp.mpf(i) / panels for i in range(panels + 1)]
        wm = mp.mpf(w)

        def f(x):
            if x >= 1:
                return mp.zero
            return mp.cos(wm * x) * mp.exp(-1 / (1 - x * x))

        return float(2 / g * mp.quad(f, pts, method="gauss-legendre"))


def _g_mp() -> mp.mpf:
    return mp.quad(lambda x: mp.exp(-1 / (1 - x * x)), [-1, 0, 1])


def asymptotic_phase(w: float) -> float:
    return w - math.sqrt(w) - 3 * math.pi / 8


def bump_ft_asymptotic(xi: float, eps: float = 1.0) -> float:
    """Steepest-descent leading term of chi_hat_eps(xi), valid for eps xi >= 25."""
    w = abs(eps * xi)
    if w < ASYMPTOTIC_GUARD:
        raise ValueError(f"eps*xi = {w:.4g} below the asymptotic guard {ASYMPTOTIC_GUARD}")
    amp = 2 / (bump_norm_constant() * w**0.75) * math.sqrt(math.pi / math.sqrt(2))
    return amp * math.cos(asymptotic_phase(w)) * math.exp(-math.sqrt(w) - 0.25)


def asymptotic_envelope(w: float) -> float:
    return 2 / (bump_norm_constant() * w**0.75) * math.sqrt(math.pi / math.sqrt(2)) * math.exp(-math.sqrt(w) - 0.25)


def asymptotic_table(ws, eps: float = 1.0) -> list[dict]:
    rows = []
    for w in ws:
        num = bump_ft_numeric(w / eps, eps)
        asy = bump_ft_asymptotic(w / eps, eps)
        rows.append({"eps_xi": w, "numeric": num, "asymptotic": asy, "rel_error": abs(asy / num - 1) if num else math.inf})
    return rows


def write_table(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


def outer_mass(r: float) -> float:
    """int_{|t| >= r} chi_1(t) dt = (2/g) int_r^1 exp(-1/(1-t^2)) dt."""
    val, _ = integrate.quad(_profile, r, 1, epsabs=0, epsrel=1e-12, limit=200)
    return 2 * val / bump_norm_constant()


def smoothing_floor(r: float) -> float:
    """h(r) = r + (2 - r) * outer_mass(r); e*(N) >= (1 - h(r)) e(N)."""
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    return r + (2 - r) * outer_mass(r)


def smoothing_floor_minimizer() -> tuple[float, float]:
    res = optimize.minimize_scalar(smoothing_floor, bounds=(0.05, 0.99), method="bounded", options={"xatol": 1e-8})
    return float(res.x), float(res.fun)


def convolve_density(x, f, eps: float) -> np.ndarray:
    """f * chi_eps on the same uniform grid; the discrete kernel is renormalised to unit mass."""
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.ndim != 1 or x.shape != f.shape or len(x) < 2:
        raise ValueError("x and f must be matching 1-d arrays")
    dx = np.diff(x)
    h = dx[0]
    if not np.allclose(dx, h, rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    if h > eps / 8:
        raise ValueError(f"grid spacing {h:.3g} too coarse for eps={eps:.3g} (need <= eps/8)")
    k = int(math.floor(eps / h))
    offsets = np.arange(-k, k + 1) * h
    kernel = bump(offsets, eps)
    kernel /= kernel.sum()
    return np.convolve(f, kernel, mode="same")
