import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinpair.measures import concurrence_wootters, half_spin_analytics, negativity
from spinpair.model import SpinPairParams, build_hamiltonian
from spinpair.phase import (boundary_curve, boundary_margin, critical_points,
                            critical_temperature, gs_boundary, gs_magnetization,
                            gs_magnetization_map, jz_threshold, lemma1_certificates,
                            pt_min_eigenvalue, stripe_width, thermal_npt)
from spinpair.thermal import ground_state, thermal_state


def bisect_root(f, lo, hi, n=200):
    flo = f(lo)
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ------------------------------------------------------------------ T = 0

def test_boundary_examples():
    assert gs_boundary(SpinPairParams(1, 1.0, 1.0)).entangled_gs
    assert gs_boundary(SpinPairParams(1, 1.0, 1.0)).margin == pytest.approx(2.0)
    assert not gs_boundary(SpinPairParams(1, 1.0, -1.5, 0.1, 0.1)).entangled_gs
    assert gs_boundary(SpinPairParams(1, 1.0, 0.0, 1.0, 0.5)).binding_inequality == "c1-hyperbola"
    assert gs_boundary(SpinPairParams(1, 1.0, 0.0, -1.0, 0.5)).binding_inequality == "c2-hyperbola"


@given(st.integers(1, 6), st.floats(-2, 2), st.floats(-2, 2), st.floats(-5, 5), st.floats(-5, 5))
def test_boundary_rescaling(two_s, J, Jz, h1, h2):
    assert boundary_margin(two_s, J, Jz, h1, h2) == pytest.approx(
        boundary_margin(1, two_s * J, two_s * Jz, h1, h2), abs=1e-12)


@given(st.integers(1, 4), st.sampled_from([1.0, -0.5, -1.0, -1.5, 0.0]),
       st.floats(-6, 6), st.floats(-6, 6))
def test_boundary_matches_diagonalisation(two_s, jz, h1, h2):
    p = SpinPairParams(two_s, 1.0, jz, h1, h2)
    v = gs_boundary(p)
    if abs(v.margin) > 1e-9:
        assert v.entangled_gs == (gs_magnetization(p, 1e-12)[0] < two_s)


def test_magnetization_map_sectors():
    axis = np.linspace(-6, 6, 61)
    m = gs_magnetization_map(4, 1.0, 0.0, axis, axis)
    assert set(np.unique(m.abs_m)) == {0, 1, 2, 3, 4}
    m = gs_magnetization_map(1, 1.0, 1.0, axis, axis)
    assert set(np.unique(m.abs_m)) == {0, 1}
    assert gs_magnetization(SpinPairParams(4, 1.0, 0.0, 100.0, 100.0))[0] == 4


def test_magnetization_steps_along_ray():
    # along h1 = h2 the ground state climbs 2s steps from 0 to 2s
    two_s = 4
    hs = np.linspace(0, 8, 801)
    ms = [gs_magnetization(SpinPairParams(two_s, 1.0, 0.0, h, h))[0] for h in hs]
    assert ms[0] == 0 and ms[-1] == two_s
    assert np.all(np.diff(ms) >= 0)
    assert len(set(ms)) == two_s + 1


def test_boundary_curve_on_margin():
    rows = boundary_curve(2, 1.0, 0.5, np.linspace(-4, 4, 9))
    for dh, lim, h1p, h2p, h1m, h2m in rows:
        assert h1p - h2p == pytest.approx(dh) and h1p + h2p == pytest.approx(lim)
        assert boundary_margin(2, 1.0, 0.5, h1p, h2p) == pytest.approx(0.0, abs=1e-12)
        assert boundary_margin(2, 1.0, 0.5, h1m, h2m) == pytest.approx(0.0, abs=1e-12)


def test_critical_points():
    info = critical_points(1, 1.0, -1.5)
    assert info.locations[0] == pytest.approx((0.5 * math.sqrt(1.25), -0.5 * math.sqrt(1.25)))
    assert info.degeneracy == info.numeric_degeneracy == 3
    assert info.numeric_energy == pytest.approx(-1.5 / 4, abs=1e-12)
    info = critical_points(4, 1.0, -1.2)
    assert info.numeric_degeneracy == 9
    assert info.numeric_energy == pytest.approx(-4.8, abs=1e-9)
    h1, h2 = info.locations[0]
    assert ground_state(build_hamiltonian(SpinPairParams(4, 1.0, -1.2, h1 + 1e-3, h2))).degeneracy < 9
    with pytest.raises(ValueError):
        critical_points(2, 1.0, -0.5)


# ------------------------------------------------------------------ T > 0

def test_half_spin_critical_temperature_closed_form():
    assert critical_temperature(1, 1.0, 0.0) == pytest.approx(0.5 / math.asinh(1.0), rel=1e-9)
    assert critical_temperature(1, 1.0, 0.0, "numeric") == pytest.approx(0.5 / math.asinh(1.0), rel=1e-8)
    assert critical_temperature(1, 1.0, -1.0) == 0.0


def test_spin_one_critical_temperature_equation():
    # 3 + 2 cosh(2 beta J) = cosh(2 sqrt2 beta J)
    beta = bisect_root(lambda b: 3 + 2 * math.cosh(2 * b) - math.cosh(2 * math.sqrt(2) * b), 0.1, 10)
    assert critical_temperature(2, 1.0, 0.0) == pytest.approx(1 / beta, rel=1e-8)


@pytest.mark.parametrize("jz", [1.0, 0.3, -0.5])
def test_stripe_closes_below_critical_temperature(jz):
    tc = critical_temperature(1, 1.0, jz)
    assert stripe_width(1, 1.0, jz, 0.9 * tc).h_c == 0.0
    assert stripe_width(1, 1.0, jz, 1.1 * tc).h_c > 0.0
    tc2 = critical_temperature(2, 1.0, jz)
    assert stripe_width(2, 1.0, jz, 0.9 * tc2).h_c == 0.0


@pytest.mark.parametrize("T", [0.3, 0.8, 2.0])
def test_half_spin_stripe_analytic_vs_numeric(T):
    a = stripe_width(1, 1.0, -1.5, T, "analytic").h_c
    b = stripe_width(1, 1.0, -1.5, T, "numeric").h_c
    assert a == pytest.approx(b, abs=1e-8)


def test_stripe_edge_separates_concurrence():
    T, jz = 0.4, -1.2
    h_c = stripe_width(1, 1.0, jz, T).h_c
    for h_avg in (0.0, 0.7, -2.0):
        inside = SpinPairParams(1, 1.0, jz, h_avg + 0.5 * (h_c - 1e-4), h_avg - 0.5 * (h_c - 1e-4))
        outside = SpinPairParams(1, 1.0, jz, h_avg + 0.5 * (h_c + 1e-4), h_avg - 0.5 * (h_c + 1e-4))
        assert half_spin_analytics(inside, T).concurrence() == 0.0
        assert half_spin_analytics(outside, T).concurrence() > 0.0


def test_stripe_onset_decreases_with_jz():
    T = 0.6
    widths = [stripe_width(1, 1.0, jz, T).h_c for jz in (-2.0, -1.5, -1.0, -0.5)]
    assert all(a > b for a, b in zip(widths, widths[1:]))


@given(st.integers(1, 3), st.floats(-1.5, 1.0), st.floats(0.1, 3.0), st.floats(-3, 3),
       st.floats(-3, 3), st.floats(-4, 4))
def test_negativity_verdict_depends_only_on_field_difference(two_s, jz, T, h1, h2, c):
    p = SpinPairParams(two_s, 1.0, jz, h1, h2)
    q = SpinPairParams(two_s, 1.0, jz, h1 + c, h2 + c)
    a, b = pt_min_eigenvalue(p, T), pt_min_eigenvalue(q, T)
    if abs(a) > 1e-9 and abs(b) > 1e-9:
        assert (a < 0) == (b < 0)


def test_npt_agrees_with_negativity():
    p = SpinPairParams(2, 1.0, -0.3, 0.6, -0.4)
    for T in (0.2, 0.6, 1.5):
        n = negativity(thermal_state(build_hamiltonian(p), T), 2)
        assert thermal_npt(p, T) == (n > 1e-12)


def test_jz_threshold():
    assert jz_threshold(1e-3, 1.0, 0.0) == pytest.approx(-1.0, abs=1e-2)
    assert jz_threshold(0.5, 1.0, 50.0) < -40
    thr = jz_threshold(0.5, 1.0, 0.0)
    below = SpinPairParams(1, 1.0, thr - 1e-6)
    above = SpinPairParams(1, 1.0, thr + 1e-6)
    assert half_spin_analytics(below, 0.5).concurrence() == 0.0
    assert half_spin_analytics(above, 0.5).concurrence() > 0.0
    with pytest.raises(ValueError):
        jz_threshold(0.0, 1.0, 0.0)


def test_stripe_validation():
    with pytest.raises(ValueError):
        stripe_width(1, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        stripe_width(2, 1.0, 0.0, 1.0, "analytic")


# --------------------------------------------------------------- shift lemma

def test_lemma1_examples():
    assert lemma1_certificates(SpinPairParams(2, 1.0, 0.4, 0.35, -0.35), 0.9, 2.0).passed()
    assert lemma1_certificates(SpinPairParams(3, 1.0, -0.2, 0.5, 0.1), 1.3, 0.0).identity_error < 1e-14


def test_lemma1_near_spin_two_stripe_edge():
    T = 0.5
    h_c = stripe_width(4, 1.0, -1.2, T).h_c
    for dh in (h_c * (1 - 1e-3), h_c * (1 + 1e-3)):
        p = SpinPairParams(4, 1.0, -1.2, dh / 2, -dh / 2)
        for shift in (3.0, -3.0):
            rep = lemma1_certificates(p, T, shift)
            assert rep.passed()
            assert rep.sign_zero == rep.sign_shift


@given(st.integers(1, 4), st.floats(-2, 2), st.floats(-3, 3), st.floats(-3, 3),
       st.floats(0.01, 5.0), st.floats(-5, 5))
def test_lemma1_property(two_s, jz, h1, h2, T, shift):
    assert lemma1_certificates(SpinPairParams(two_s, 1.0, jz, h1, h2), T, shift).passed()


def test_half_spin_wootters_and_npt_agree():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = SpinPairParams(1, 1.0, rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-3, 3))
        T = rng.uniform(0.05, 3)
        c = concurrence_wootters(thermal_state(build_hamiltonian(p), T))
        if c > 1e-9:
            assert thermal_npt(p, T)
        elif c == 0.0 and abs(pt_min_eigenvalue(p, T)) > 1e-9:
            assert not thermal_npt(p, T)


def test_half_spin_stripe_approaches_zero_temperature_limit_linearly():
    # Delta_c = -Jz + 2T log(2 Delta_c / J) + ..., so the relative error of
    # h_c against sqrt(Jz^2 - J^2) is linear in T with slope ~2.65/J here
    limit = math.sqrt(1.25)
    errs = {T: stripe_width(1, 1.0, -1.5, T).h_c / limit - 1 for T in (0.01, 0.005, 0.002, 0.001)}
    slopes = [e / T for T, e in errs.items()]
    assert max(slopes) - min(slopes) < 0.05
    assert 2.5 < slopes[0] < 2.8
    assert errs[0.002] < 0.01
    delta = 1.5
    for _ in range(50):
        delta = 1.5 + 0.02 * math.log(2 * delta)
    assert stripe_width(1, 1.0, -1.5, 0.01).h_c == pytest.approx(math.sqrt(delta ** 2 - 1), rel=2e-3)
