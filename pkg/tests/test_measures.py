import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinpair.measures import (coherence_asymptotic, concurrence_pure_psi,
                               concurrence_wootters, entanglement_entropy_pure,
                               eof_from_concurrence, half_spin_analytics,
                               maximally_entangled_state, negativity, negativity_pure,
                               negativity_via_reduced, rel_entropy_coherence,
                               spin_one_analytics, von_neumann_entropy)
from spinpair.model import SpinPairParams, build_hamiltonian
from spinpair.thermal import ground_state, thermal_state

BELL = np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2)


def binary_entropy(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    return q * np.sign(np.diag(r))


@st.composite
def half_spin_states(draw):
    p = SpinPairParams(1, draw(st.sampled_from([1.0, -1.0, 0.5])), draw(st.floats(-2, 2)),
                       draw(st.floats(-3, 3)), draw(st.floats(-3, 3)))
    return p, draw(st.floats(0.02, 5.0))


# ------------------------------------------------------------ concurrence

def test_wootters_reference_states():
    assert concurrence_wootters(np.outer(BELL, BELL)) == pytest.approx(1.0, abs=1e-14)
    assert concurrence_wootters(np.eye(4) / 4) == 0.0
    for p in np.linspace(0, 1, 11):
        werner = p * np.outer(BELL, BELL) + (1 - p) * np.eye(4) / 4
        assert concurrence_wootters(werner) == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-13)


@given(st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 0.1))
def test_wootters_pure_states(v):
    psi = np.array(v) / np.linalg.norm(v)
    expected = 2 * abs(psi[0] * psi[3] - psi[1] * psi[2])
    assert concurrence_wootters(np.outer(psi, psi)) == pytest.approx(expected, abs=1e-12)


@given(half_spin_states())
def test_wootters_matches_block_formula(case):
    p, T = case
    rho = thermal_state(build_hamiltonian(p), T)
    closed = half_spin_analytics(p, T)
    np.testing.assert_allclose(np.asarray(rho), closed.matrix(), atol=1e-13)
    assert concurrence_wootters(rho) == pytest.approx(closed.concurrence(), abs=1e-12)


def test_concurrence_pure_psi_examples():
    assert concurrence_pure_psi(SpinPairParams(1, 1.0, 0.0, 0.4, 0.4)) == pytest.approx(1.0)
    assert concurrence_pure_psi(SpinPairParams(1, 1.0, 0.0, math.sqrt(3), 0.0)) == pytest.approx(0.5)
    assert concurrence_pure_psi(SpinPairParams(1, 1.0, 0.0, 1e6, 0.0)) < 1e-5
    with pytest.raises(ValueError):
        concurrence_pure_psi(SpinPairParams(2, 1.0, 0.0))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-2, 2))
def test_m0_eigenstates_have_closed_form_concurrence(h1, h2, jz):
    p = SpinPairParams(1, 1.0, jz, h1, h2)
    H = build_hamiltonian(p)
    for k in range(2):
        psi = H.embed(0, H.spectra[0].eigenvectors[:, k])
        assert concurrence_wootters(np.outer(psi, psi)) == pytest.approx(concurrence_pure_psi(p), abs=1e-10)
        assert entanglement_entropy_pure(psi, 1) == pytest.approx(
            eof_from_concurrence(concurrence_pure_psi(p)), abs=1e-10)


def test_eof_values():
    assert eof_from_concurrence(0.0) == 0.0
    assert eof_from_concurrence(1.0) == pytest.approx(1.0)
    assert eof_from_concurrence(0.6) == pytest.approx(binary_entropy(0.9), abs=1e-14)
    cs = np.linspace(0, 1, 50)
    assert np.all(np.diff([eof_from_concurrence(c) for c in cs]) > 0)
    with pytest.raises(ValueError):
        eof_from_concurrence(1.5)


# ------------------------------------------------------------- negativity

def test_negativity_reference_states():
    assert negativity(np.outer(BELL, BELL), 1) == pytest.approx(0.5, abs=1e-14)
    prod = np.kron(np.diag([0.3, 0.2, 0.5]), np.diag([0.1, 0.6, 0.3]))
    assert negativity(prod, 2) == 0.0
    for two_s in range(1, 7):
        psi = maximally_entangled_state(two_s)
        assert negativity_pure(psi, two_s) == pytest.approx(two_s / 2, abs=1e-10)
        assert negativity(np.outer(psi, psi), two_s) == pytest.approx(two_s / 2, abs=1e-10)


@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_pure_negativity_formula_matches_partial_transpose(two_s, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(two_s + 1) ** 2)
    psi /= np.linalg.norm(psi)
    n = negativity(np.outer(psi, psi), two_s)
    assert negativity_pure(psi, two_s) == pytest.approx(n, abs=1e-10)
    assert negativity_via_reduced(psi, two_s) == pytest.approx(n, abs=1e-10)
    assert 0 <= n <= two_s / 2 + 1e-12


@given(st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_negativity_local_invariance(two_s, seed):
    rng = np.random.default_rng(seed)
    d = two_s + 1
    a = rng.normal(size=(d * d, 3))
    rho = a @ a.T
    rho /= np.trace(rho)
    u = np.kron(random_orthogonal(rng, d), random_orthogonal(rng, d))
    assert negativity(u @ rho @ u.T, two_s) == pytest.approx(negativity(rho, two_s), abs=1e-12)


def test_unnormalised_vector_rejected():
    with pytest.raises(ValueError):
        negativity_pure(np.array([1.0, 0, 0, 1.0]), 1)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        negativity(np.eye(4) / 4, 2)


# ------------------------------------------------------- spin-1 closed forms

@pytest.mark.parametrize("eta", [0.0, 1.0, 2.5, -1.3])
def test_spin_one_states_are_eigenstates(eta):
    a = spin_one_analytics(eta)
    assert a.gamma_plus ** 2 + a.gamma_zero ** 2 + a.gamma_minus ** 2 == pytest.approx(1.0)
    p = SpinPairParams(2, 1.0, 0.0, eta, 0.0)
    h = build_hamiltonian(p).dense()
    for psi in (a.state_m0(), a.state_m1(1), a.state_m1(-1)):
        hpsi = h @ psi
        e = psi @ hpsi
        np.testing.assert_allclose(hpsi, e * psi, atol=1e-12)
    # the M = 0 closed form is the lowest M = 0 level
    H = build_hamiltonian(p)
    assert a.state_m0() @ h @ a.state_m0() == pytest.approx(H.block_eigenvalues[0][0], abs=1e-12)
    assert negativity_pure(a.state_m0(), 2) == pytest.approx(a.negativity_m0(), abs=1e-12)
    assert a.negativity_m0() == pytest.approx(a.negativity_m0_eta(), abs=1e-12)
    assert negativity_pure(a.state_m1(1), 2) == pytest.approx(a.negativity_m1(), abs=1e-12)


def test_spin_one_zero_asymmetry_anchors():
    a = spin_one_analytics(0.0)
    assert negativity_pure(a.state_m1(1), 2) == pytest.approx(0.5, abs=1e-10)
    assert negativity_pure(a.state_m0(), 2) == pytest.approx((1 + 2 * math.sqrt(2)) / 4, abs=1e-10)


# ---------------------------------------------------------------- coherence

def test_coherence_basic():
    assert rel_entropy_coherence(np.diag([0.1, 0.2, 0.3, 0.4])) == 0.0
    plus = np.full(4, 0.5)
    assert rel_entropy_coherence(np.outer(plus, plus)) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        von_neumann_entropy(np.diag([1.5, -0.5]))


@given(half_spin_states())
def test_coherence_matches_closed_form(case):
    p, T = case
    rho = thermal_state(build_hamiltonian(p), T)
    assert rel_entropy_coherence(rho) == pytest.approx(half_spin_analytics(p, T).coherence(), abs=1e-12)


def test_ground_state_coherence_is_entanglement_entropy():
    p = SpinPairParams(2, 1.0, 0.3, 0.4, -0.2)
    H = build_hamiltonian(p)
    gs = ground_state(H)
    assert gs.degeneracy == 1
    psi = gs.members[0].vector
    assert rel_entropy_coherence(np.outer(psi, psi)) == pytest.approx(
        entanglement_entropy_pure(psi, 2), abs=1e-10)


def test_coherence_asymptotic_leading_term():
    p = SpinPairParams(1, 1.0, 0.0)
    assert coherence_asymptotic(p, 100.0, refined=False) == pytest.approx(1e-4 / (16 * math.log(2)))
    assert coherence_asymptotic(SpinPairParams(4, 0.0, 1.0), 10.0) == 0.0
    with pytest.raises(ValueError):
        coherence_asymptotic(p, 0.0)


def test_coherence_asymptotic_spin_one():
    p = SpinPairParams(2, 1.0, 0.0)
    exact = rel_entropy_coherence(thermal_state(build_hamiltonian(p), 50.0))
    assert coherence_asymptotic(p, 50.0) == pytest.approx(exact, rel=1e-2)


@pytest.mark.parametrize("two_s", [1, 2, 3, 4])
@pytest.mark.parametrize("h", [0.0, 0.7])
def test_maximally_entangled_m0_eigenstates(two_s, h):
    # Jz = +J: the lowest M = 0 level reaches N = s; Jz = -J: the highest does
    for jz, k in ((1.0, 0), (-1.0, -1)):
        H = build_hamiltonian(SpinPairParams(two_s, 1.0, jz, h, h))
        psi = H.embed(0, H.spectra[0].eigenvectors[:, k])
        assert negativity_pure(psi, two_s) == pytest.approx(two_s / 2, abs=1e-10)


def test_spin_one_m0_negativity_peaks_at_isotropic_point():
    jz = np.linspace(-3, 3, 601)
    n = []
    for j in jz:
        H = build_hamiltonian(SpinPairParams(2, 1.0, j))
        n.append(negativity_pure(H.embed(0, H.spectra[0].eigenvectors[:, 0]), 2))
    assert jz[int(np.argmax(n))] == pytest.approx(1.0)
    assert max(n) == pytest.approx(1.0, abs=1e-12)
