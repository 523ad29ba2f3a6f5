import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from unitrace.smoothing import (
    ASYMPTOTIC_GUARD,
    BumpKernel,
    asymptotic_envelope,
    asymptotic_phase,
    asymptotic_table,
    bump,
    bump_ft_asymptotic,
    bump_ft_numeric,
    bump_norm_constant,
    convolve_density,
    outer_mass,
    smoothing_floor,
    smoothing_floor_minimizer,
    write_table,
)


def test_norm_constant():
    g = bump_norm_constant()
    assert abs(g - 0.44399) <= 5e-6
    assert g < 2 / math.e


def test_kernel_values():
    for eps in (0.3, 1.0, 2.5):
        assert bump(eps, eps) == 0 and bump(-eps, eps) == 0
        assert bump(0.0, eps) == pytest.approx(math.exp(-1) / (bump_norm_constant() * eps), rel=1e-14)
        assert bump(0.0, eps) * eps == pytest.approx(0.8286, abs=2e-4)
        mass, _ = integrate.quad(lambda x: bump(x, eps), -eps, eps, epsabs=1e-13)
        assert mass == pytest.approx(1, abs=1e-10)
    x = np.linspace(-2, 2, 41)
    np.testing.assert_array_equal(bump(x, 1.3), bump(-x, 1.3))
    with pytest.raises(ValueError):
        BumpKernel(0)


def test_transform_basics():
    k = BumpKernel(0.5)
    assert k.ft(0) == 1.0
    for xi in (0.7, 3.0, 11.0):
        assert k.ft(xi) == k.ft(-xi)
        assert abs(k.ft(xi)) <= 1
    assert bump_ft_numeric(50, 0.1) == pytest.approx(bump_ft_numeric(5, 1.0), rel=1e-12)


def test_transform_against_plain_quadrature():
    g = bump_norm_constant()
    for w in (1.0, 6.0, 20.0):
        val, _ = integrate.quad(lambda x: math.cos(w * x) * math.exp(-1 / (1 - x * x)), 0, 1, limit=400, epsabs=1e-14)
        assert bump_ft_numeric(w) == pytest.approx(2 * val / g, abs=1e-12)


def test_asymptotic_guard():
    with pytest.raises(ValueError):
        bump_ft_asymptotic(ASYMPTOTIC_GUARD - 1)


def test_asymptotic_relative_error():
    rows = [r for r in asymptotic_table([200, 400, 800]) if abs(math.cos(asymptotic_phase(r["eps_xi"]))) >= 0.3]
    assert rows
    for r in rows:
        assert r["rel_error"] <= 5 / math.sqrt(r["eps_xi"])


def test_zero_crossings_bracketed():
    # every zero of the asymptotic phase in [200, 400] has a sign change of the numeric transform nearby
    k0 = math.ceil((asymptotic_phase(200) + 3 * math.pi / 8 - math.pi / 2) / math.pi)
    checked = 0
    for k in range(k0, k0 + 200):
        target = math.pi / 2 + k * math.pi
        lo, hi = 200.0, 400.0
        if asymptotic_phase(lo) > target or asymptotic_phase(hi) < target:
            continue
        for _ in range(60):
            mid = (lo + hi) / 2
            lo, hi = (mid, hi) if asymptotic_phase(mid) < target else (lo, mid)
        w0 = lo
        a, b = bump_ft_numeric(w0 - math.pi / 2), bump_ft_numeric(w0 + math.pi / 2)
        assert a * b < 0
        checked += 1
        if checked == 6:
            break
    assert checked == 6


def test_damping_envelope():
    vals = []
    for w in (100.0, 220.0, 400.0, 650.0, 1000.0):
        peak = max(abs(bump_ft_numeric(float(w + d))) for d in np.linspace(0, 2 * math.pi, 9))
        vals.append(math.log(peak) + math.sqrt(w) + 0.75 * math.log(w))
        assert peak <= 1.5 * asymptotic_envelope(w)
    assert max(vals) - min(vals) < 1.0


def test_smoothing_floor():
    assert smoothing_floor(2 / 3) == pytest.approx(0.77646, abs=5e-5)
    r, h = smoothing_floor_minimizer()
    assert 0.6 <= r <= 0.75 and h <= smoothing_floor(2 / 3)
    assert smoothing_floor(0.999) == pytest.approx(1, abs=2e-3)
    assert outer_mass(0.0 + 1e-12) == pytest.approx(1, abs=1e-9)
    with pytest.raises(ValueError):
        smoothing_floor(1.0)


def test_convolution():
    x = np.linspace(-3, 3, 6001)
    h = x[1] - x[0]
    delta = np.zeros_like(x)
    delta[3000] = 1 / h
    out = convolve_density(x, delta, 0.5)
    np.testing.assert_allclose(out, bump(x, 0.5), atol=2e-3)
    # phi is negligible at the grid edges, so the zero padding loses no mass
    y = np.linspace(-9, 9, 3601)
    phi = np.exp(-y * y / 2) / math.sqrt(2 * math.pi)
    sm = convolve_density(y, phi, 0.05)
    assert np.max(np.abs(sm - phi)) <= 1e-3
    assert np.trapezoid(sm, y) == pytest.approx(np.trapezoid(phi, y), abs=1e-9)
    with pytest.raises(ValueError):
        convolve_density(y[::500], phi[::500], 0.05)
    with pytest.raises(ValueError):
        convolve_density(np.array([0.0, 1.0, 3.0]), np.ones(3), 100.0)


@given(st.lists(st.floats(-1, 1), min_size=4, max_size=12), st.integers(0, 10**6))
def test_smoothed_sup_keeps_a_fixed_fraction(slopes, seed):
    # |Delta'| <= e / eta and max |Delta| = e imply max |Delta * chi_eta| >= (1 - h(2/3)) e
    slopes = np.array(slopes)
    if np.max(np.abs(slopes)) < 1e-3:
        return
    n_per = 400
    x = np.linspace(0, len(slopes), len(slopes) * n_per + 1)
    d = np.concatenate([[0.0], np.cumsum(np.repeat(slopes, n_per) * (x[1] - x[0]))])
    d -= np.random.default_rng(seed).uniform(d.min(), d.max())
    e = np.max(np.abs(d))
    if e == 0:
        return
    eta = e / np.max(np.abs(slopes))
    h = x[1] - x[0]
    if h > eta / 8:
        return
    pad = int(math.ceil(eta / h)) + 1
    dp = np.pad(d, pad, mode="edge")
    xp = (np.arange(len(dp)) - pad) * h
    sm = convolve_density(xp, dp, eta)[pad:-pad]
    assert np.max(np.abs(sm)) >= (1 - smoothing_floor(2 / 3)) * e * (1 - 1e-3)


def test_write_table(tmp_path):
    rows = asymptotic_table([200])
    write_table(rows, tmp_path / "t.csv")
    text = (tmp_path / "t.csv").read_text().splitlines()
    assert text[0] == "eps_xi,numeric,asymptotic,rel_error"
    assert repr(rows[0]["numeric"]) in text[1]
