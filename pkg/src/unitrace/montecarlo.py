"""Haar sampling of X_N, Kolmogorov and total-variation distances, rate fits.

Random streams: sample ``i`` belongs to chunk ``i // chunk``, and chunk ``c``
draws from ``SeedSequence(seed, spawn_key=(c,))``.  Output is therefore
bit-identical for a given (seed, chunk) whatever the number of workers.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import special, stats

from .charfun import density_difference
from .moments import SpectrumSpec
from .smoothing import convolve_density

DKW_LEVEL = 0.05
DEFAULT_CHUNK = 20000
BATCH_MAGIC = b"UTRBATCH"


def dkw_halfwidth(m: int, level: float = DKW_LEVEL) -> float:
    """sqrt(log(2/level) / (2M)): the DKW band, used as the error bar of e(N)."""
    return math.sqrt(math.log(2 / level) / (2 * m))


def haar_unitary(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed U(n) matrices: QR of a complex Ginibre matrix, with R's diagonal made positive."""
    if n < 1:
        raise ValueError("N must be positive")
    shape = (n, n) if size is None else (size, n, n)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phase = d / np.abs(d)
    return q * phase[..., None, :]


@dataclass
class SampleBatch:
    """Draws of X = Re tr(A U)/sigma (and optionally Y = Im tr(A U)/sigma)."""

    spec: SpectrumSpec
    seed: int
    chunk: int
    x: np.ndarray
    y: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.x)

    def seed_plan(self) -> dict:
        return {"seed": self.seed, "chunk": self.chunk, "streams": math.ceil(self.m / self.chunk), "scheme": "SeedSequence(seed, spawn_key=(chunk_index,))"}

    def header(self) -> dict:
        return {
            "spec_hash": spec_hash(self.spec),
            "spec": self.spec.describe(),
            "seed_plan": self.seed_plan(),
            "M": self.m,
            "paired": self.y is not None,
            **self.meta,
        }

    def save(self, path) -> None:
        path = Path(path)
        head = json.dumps(self.header(), sort_keys=True).encode()
        payload = self.x.astype("<f8").tobytes()
        if self.y is not None:
            payload += self.y.astype("<f8").tobytes()
        with open(path, "wb") as fh:
            fh.write(BATCH_MAGIC + struct.pack("<Q", len(head)) + head + payload)
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(self.header(), indent=2, sort_keys=True))


def load_batch(path, spec: SpectrumSpec) -> SampleBatch:
    raw = Path(path).read_bytes()
    if raw[:8] != BATCH_MAGIC:
        raise ValueError(f"{path}: not a sample batch file")
    (hlen,) = struct.unpack("<Q", raw[8:16])
    head = json.loads(raw[16 : 16 + hlen])
    if head["spec_hash"] != spec_hash(spec):
        raise ValueError(f"{path}: batch was drawn for a different spectrum")
    data = np.frombuffer(raw[16 + hlen :], dtype="<f8")
    m = head["M"]
    x = data[:m].copy()
    y = data[m : 2 * m].copy() if head["paired"] else None
    plan = head["seed_plan"]
    return SampleBatch(spec, plan["seed"], plan["chunk"], x, y)


def spec_hash(spec: SpectrumSpec) -> str:
    return hashlib.sha256(json.dumps(spec.describe(), sort_keys=True).encode()).hexdigest()[:16]


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _draw_chunk(spec, matrix, seed, index, count):
    rng = _chunk_rng(seed, index)
    u = haar_unitary(spec.n, rng, size=count)
    if matrix is None:
        t = np.diagonal(u, axis1=1, axis2=2) @ spec.nu
    else:
        t = np.einsum("ij,kji->k", matrix, u)
    return t / spec.sigma


def sample_trace_stat(
    spec: SpectrumSpec,
    m: int,
    seed: int = 0,
    *,
    paired: bool = False,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
    matrix: np.ndarray | None = None,
) -> SampleBatch:
    """M draws of X_N with A = diag(nu), or with an explicit ``matrix`` of the same spectrum."""
    if m < 1:
        raise ValueError("M must be positive")
    if matrix is not None:
        matrix = np.asarray(matrix, dtype=complex)
        sv = np.sort(np.linalg.svd(matrix, compute_uv=False) ** 2)
        if matrix.shape != (spec.n, spec.n) or not np.allclose(sv, [float(v) for v in spec.nu2], atol=1e-9):
            raise ValueError("matrix does not have the spectrum's singular values")
    counts = [min(chunk, m - start) for start in range(0, m, chunk)]
    jobs = [(spec, matrix, seed, i, c) for i, c in enumerate(counts)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _draw_chunk(*job), jobs))
    else:
        parts = [_draw_chunk(*job) for job in jobs]
    t = np.concatenate(parts)
    return SampleBatch(spec, seed, chunk, t.real.copy(), t.imag.copy() if paired else None)


@dataclass(frozen=True)
class DistanceEstimate:
    estimate: float
    stderr: float


def kolmogorov_distance(sample) -> DistanceEstimate:
    """sup_x |F_M(x) - Phi(x)| over the sample, with the DKW half-width as error."""
    x = sample.x if isinstance(sample, SampleBatch) else np.asarray(sample, dtype=float)
    m = len(x)
    if m < 2:
        raise ValueError("need at least two samples")
    xs = np.sort(x)
    cdf = special.ndtr(xs)
    i = np.arange(1, m + 1)
    d = max(float(np.max(i / m - cdf)), float(np.max(cdf - (i - 1) / m)))
    return DistanceEstimate(d, dkw_halfwidth(m))


def kolmogorov_from_density(
    spec: SpectrumSpec, route: str = "auto", half_width: float = 10.0, points: int = 4001
) -> DistanceEstimate:
    """sup |F_N - Phi| by integrating the inverted density difference; no sampling noise."""
    x = np.linspace(-half_width, half_width, points)
    res = density_difference(spec, x, route=route)
    cum = np.concatenate([[0.0], np.cumsum((res.f[1:] + res.f[:-1]) / 2 * np.diff(x))])
    outside = special.ndtr(-half_width)
    return DistanceEstimate(float(np.max(np.abs(cum))), float(2 * half_width * (res.error + res.tail) + outside))


def two_sample_ks(a, b) -> tuple[float, float]:
    res = stats.ks_2samp(a, b)
    return float(res.statistic), float(res.pvalue)


@dataclass(frozen=True)
class TVEstimate:
    value: float
    error: float
    method: str


def silverman_bandwidth(m: int) -> float:
    """1.06 M^{-1/5} for unit-variance data."""
    return 1.06 * m ** (-0.2)


def tv_estimate(
    spec: SpectrumSpec,
    method: str = "psi-inversion",
    *,
    m: int = 1_000_000,
    seed: int = 0,
    bandwidth: float | None = None,
    route: str = "auto",
    half_width: float = 10.0,
    points: int = 4001,
) -> TVEstimate:
    """int |f_N - phi| by smoothed histogram or by inverting psi_N - psi."""
    x = np.linspace(-half_width, half_width, points)
    dx = x[1] - x[0]
    phi = np.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    outside = 2 * special.ndtr(-half_width)
    if method == "psi-inversion":
        res = density_difference(spec, x, route=route)
        tv = float(np.trapezoid(np.abs(res.f), x) + outside)
        # pointwise error of the inverted difference, integrated over the grid
        err = float(2 * half_width * (res.error + res.tail))
        return TVEstimate(tv, err, f"psi-inversion/{res.route}")
    if method == "histogram":
        batch = sample_trace_stat(spec, m, seed)
        h = bandwidth or silverman_bandwidth(m)
        counts, _ = np.histogram(batch.x, bins=np.append(x - dx / 2, x[-1] + dx / 2))
        f = counts / (m * dx)
        if h >= 8 * dx:
            f = convolve_density(x, f, h)
        tv = float(np.trapezoid(np.abs(f - phi), x) + outside)
        # Noise floor of a kernel estimate: E|f_hat - f| ~ sqrt(2 f R / (pi M h)), R = int kernel^2.
        noise = float(np.trapezoid(np.sqrt(2 * phi * 1.3 / (math.pi * m * h)), x))
        return TVEstimate(tv, noise, "histogram")
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class RateReport:
    n: tuple[int, ...]
    estimate: tuple[float, ...]
    stderr: tuple[float, ...]
    usable: tuple[bool, ...]
    slope: float
    intercept: float
    slope_stderr: float
    target: float | None = None

    @property
    def slope_ci(self) -> tuple[float, float]:
        return (self.slope - 1.96 * self.slope_stderr, self.slope + 1.96 * self.slope_stderr)

    def as_dict(self) -> dict:
        return {
            "points": [
                {"N": n, "estimate": e, "stderr": s, "usable": u}
                for n, e, s, u in zip(self.n, self.estimate, self.stderr, self.usable)
            ],
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "slope_ci95": list(self.slope_ci),
            "target_exponent": self.target,
        }


class RateFitError(ValueError):
    pass


def rate_fit(points, b: float | None = None) -> RateReport:
    """Weighted least squares of log e against log N (weights (e/se)^2; exact points weigh equally)."""
    pts = sorted((int(n), float(e), float(s)) for n, e, s in points)
    ns = [p[0] for p in pts]
    if len(set(ns)) != len(ns):
        raise RateFitError("N values must be distinct")
    usable = tuple(e > s and e > 0 for _, e, s in pts)
    good = [p for p, u in zip(pts, usable) if u]
    if len(good) < 3:
        raise RateFitError(f"only {len(good)} usable points (estimate must exceed its standard error)")
    lx = np.log([p[0] for p in good])
    ly = np.log([p[1] for p in good])
    rel = np.array([p[2] / p[1] for p in good])
    w = np.ones_like(rel) if np.all(rel == 0) else 1 / np.maximum(rel, 1e-12) ** 2
    design = np.column_stack([lx, np.ones_like(lx)])
    cov = np.linalg.inv(design.T @ (w[:, None] * design))
    slope, intercept = cov @ design.T @ (w * ly)
    slope_se = math.sqrt(cov[0, 0]) if not np.all(rel == 0) else 0.0
    return RateReport(
        tuple(ns),
        tuple(p[1] for p in pts),
        tuple(p[2] for p in pts),
        usable,
        float(slope),
        float(intercept),
        slope_se,
        None if b is None else -(2 - b),
    )
