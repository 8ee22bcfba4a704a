"""Entanglement and coherence quantifiers.

General numerical routines (Wootters concurrence, negativity, entropies,
relative entropy of coherence) sit next to the closed forms available for
s = 1/2 and s = 1, so that each can be checked against the other. All
entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (DimensionError, eig_sym_dense,
                     partial_transpose, trace_norm_negativity)
from .model import SpinPairParams, derived_scales
from .thermal import reduced_state

_CLIP = 1e-14
_NORM_TOL = 1e-10
_PSD_TOL = 1e-10

# sigma_y (x) sigma_y is real: a signed anti-diagonal permutation
_SYSY = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))


def _as_matrix(rho) -> np.ndarray:
    return np.asarray(getattr(rho, "matrix", rho), dtype=float)


def _check_state_vector(psi, two_s: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=float).reshape(-1)
    d = two_s + 1
    if psi.size != d * d:
        raise DimensionError(f"vector of length {psi.size} is not a spin-{two_s}/2 pair")
    if abs(np.linalg.norm(psi) - 1.0) > _NORM_TOL:
        raise ValueError("state vector is not normalised")
    return psi


def schmidt_probabilities(psi, two_s: int) -> np.ndarray:
    """Squared Schmidt coefficients of a pure pair state, descending."""
    psi = _check_state_vector(psi, two_s)
    d = two_s + 1
    sv = np.linalg.svd(psi.reshape(d, d), compute_uv=False)
    return sv ** 2


def entropy_bits(probs) -> float:
    """Shannon entropy in bits; weights below 1e-14 count as zero."""
    p = np.asarray(probs, dtype=float)
    p = p[p > _CLIP]
    return float(-np.sum(p * np.log2(p))) + 0.0


def von_neumann_entropy(rho) -> float:
    m = _as_matrix(rho)
    evals = eig_sym_dense(m).eigenvalues
    if evals[0] < -_PSD_TOL:
        raise ValueError(f"state is not positive semidefinite (min eigenvalue {evals[0]:.3e})")
    return entropy_bits(evals)


# ---------------------------------------------------------------- two qubits

def concurrence_pure_psi(p: SpinPairParams) -> float:
    """Concurrence J/Delta of the M = 0 eigenstates of a spin-1/2 pair."""
    if p.two_s != 1:
        raise ValueError("closed-form concurrence needs s = 1/2")
    return abs(p.J) / derived_scales(p).Delta


def concurrence_wootters(rho) -> float:
    """Wootters concurrence of a real two-qubit density matrix.

    With rho = W W^T the lambda_i are the absolute eigenvalues of the real
    symmetric W^T (sy x sy) W, so no square root of a rounding-level
    eigenvalue is ever taken on the spin-flipped side.
    """
    m = _as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"concurrence needs a 4x4 state, got {m.shape}")
    spec = eig_sym_dense(m)
    w = spec.eigenvectors * np.sqrt(np.clip(spec.eigenvalues, 0.0, None))
    lam = np.sort(np.abs(np.linalg.eigvalsh(w.T @ _SYSY @ w)))[::-1]
    return float(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0)) + 0.0


def eof_from_concurrence(C: float) -> float:
    """Entanglement of formation (bits) of a two-qubit state with concurrence C."""
    if not -1e-12 <= C <= 1 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {C}")
    C = min(max(C, 0.0), 1.0)
    root = math.sqrt(max(1.0 - C * C, 0.0))
    return entropy_bits([(1 + root) / 2, (1 - root) / 2])


# ---------------------------------------------------------------- negativity

def negativity(rho, two_s: int) -> float:
    """Sum of the magnitudes of the negative eigenvalues of rho^{t2}."""
    m = _as_matrix(rho)
    d = two_s + 1
    if m.shape != (d * d, d * d):
        raise DimensionError(f"state of shape {m.shape} is not a spin-{two_s}/2 pair")
    return trace_norm_negativity(partial_transpose(m, d, d))


def negativity_pure(psi, two_s: int) -> float:
    """Pure-state negativity ((sum_i sqrt(p_i))^2 - 1) / 2 over Schmidt weights."""
    p = schmidt_probabilities(psi, two_s)
    return 0.5 * (float(np.sum(np.sqrt(p))) ** 2 - 1.0)


def entanglement_entropy_pure(psi, two_s: int) -> float:
    """Von Neumann entropy (bits) of either reduced state of a pure pair state."""
    return entropy_bits(schmidt_probabilities(psi, two_s))


def maximally_entangled_state(two_s: int) -> np.ndarray:
    d = two_s + 1
    return np.eye(d).reshape(-1) / math.sqrt(d)


# ------------------------------------------------------------------ coherence

def rel_entropy_coherence(rho) -> float:
    """S(diag rho) - S(rho) in the product basis, in bits."""
    m = _as_matrix(rho)
    return max(entropy_bits(np.diag(m)) - von_neumann_entropy(m), 0.0)


def coherence_asymptotic(p: SpinPairParams, T: float, refined: bool = True) -> float:
    """High-temperature expansion of the relative entropy of coherence.

    Leading term (s(s+1) J / T)^2 / (9 ln 2) for any spin. With ``refined``
    the next corrections are included where known: s = 1/2 (any Jz) and
    s = 1 at Jz = 0; other cases return the leading term. Meaningful only
    for T much larger than max(|J|, |Jz|, |h1|, |h2|).
    """
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    s = p.s
    x = p.J / T
    lead = (s * (s + 1) * x) ** 2 / (9 * math.log(2))
    if not refined:
        return lead
    hs, hd = p.h1 + p.h2, p.h1 - p.h2
    if p.two_s == 1:
        corr = (1 + p.Jz / (4 * T)
                - (3 * (hs ** 2 + p.J ** 2) + hd ** 2) / (48 * T ** 2))
        return lead * corr
    if p.two_s == 2 and p.Jz == 0.0:
        corr = 1 - (55 * p.J ** 2 + 15 * hs ** 2 + 9 * hd ** 2) / (12 * T) ** 2
        return lead * corr
    return lead


# --------------------------------------------------------- closed forms s=1/2

@dataclass(frozen=True)
class HalfSpinAnalytics:
    """Closed-form thermal state of the spin-1/2 pair.

    ``rho = [[p+, 0, 0, 0], [0, q+, w, 0], [0, w, q-, 0], [0, 0, 0, p-]]`` in
    the basis |00>, |01>, |10>, |11> (0 = spin up).
    """

    Delta: float
    eta: float
    alpha_plus: float
    alpha_minus: float
    p_plus: float
    p_minus: float
    q_plus: float
    q_minus: float
    w: float
    p0_plus: float
    p0_minus: float
    log_Z: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.p_plus, 0, 0, 0],
                         [0, self.q_plus, self.w, 0],
                         [0, self.w, self.q_minus, 0],
                         [0, 0, 0, self.p_minus]])

    def concurrence(self) -> float:
        return 2.0 * max(abs(self.w) - math.sqrt(self.p_plus * self.p_minus), 0.0)

    def coherence(self) -> float:
        """-sum_nu (q_nu log2 q_nu - p0_nu log2 p0_nu)."""
        return entropy_bits([self.q_plus, self.q_minus]) \
            - entropy_bits([self.p0_plus, self.p0_minus])


def half_spin_analytics(p: SpinPairParams, T: float) -> HalfSpinAnalytics:
    if p.two_s != 1:
        raise ValueError("closed forms need s = 1/2")
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    beta = 1.0 / T
    dh = p.h1 - p.h2
    eta, delta, _ = derived_scales(p)
    e_up = -0.5 * (p.h1 + p.h2) + 0.25 * p.Jz
    e_dn = 0.5 * (p.h1 + p.h2) + 0.25 * p.Jz
    e0p = 0.5 * delta - 0.25 * p.Jz
    e0m = -0.5 * delta - 0.25 * p.Jz
    energies = np.array([e_up, e_dn, e0p, e0m])
    shift = energies.min()
    bz = np.exp(-beta * (energies - shift))
    z = bz.sum()
    pu, pd, x0p, x0m = bz / z
    # e^{beta Jz/4} cosh(beta Delta/2) and sinh(...) in terms of the M=0 weights
    ch, sh = 0.5 * (x0m + x0p), 0.5 * (x0m - x0p)
    return HalfSpinAnalytics(
        Delta=delta, eta=eta,
        alpha_plus=math.atan((dh + delta) / p.J),
        alpha_minus=math.atan((dh - delta) / p.J),
        p_plus=pu, p_minus=pd,
        q_plus=ch + dh / delta * sh, q_minus=ch - dh / delta * sh,
        w=-p.J / delta * sh,
        p0_plus=x0p, p0_minus=x0m,
        log_Z=float(-beta * shift + np.log(z)))


# ----------------------------------------------------------- closed forms s=1

@dataclass(frozen=True)
class SpinOneAnalytics:
    """Closed-form eigenstates of the spin-1 pair at field asymmetry eta.

    The M = +-1 states are cos(a) |+-1, 0> + sin(a) |0, +-1> with
    tan(a_+-) = +-eta/2 - sqrt(1 + eta^2/4). The gamma coefficients describe
    the lowest M = 0 state gamma_+ |1,-1> + gamma_0 |0,0> + gamma_- |-1,1>
    and hold for Jz = 0 only.
    """

    eta: float
    alpha_plus: float
    alpha_minus: float
    gamma_plus: float
    gamma_zero: float
    gamma_minus: float

    def negativity_m1(self) -> float:
        return 0.5 * abs(math.sin(2 * self.alpha_plus))

    def negativity_m0(self) -> float:
        g_p, g_0, g_m = abs(self.gamma_plus), abs(self.gamma_zero), abs(self.gamma_minus)
        return g_p * g_m + g_0 * (g_p + g_m)

    def negativity_m0_eta(self) -> float:
        """Same quantity written directly in eta."""
        eta = self.eta
        r = math.sqrt(2 + eta * eta)
        num = 1 + math.sqrt(2) * sum(math.sqrt(1 + eta * (eta + nu * r)) for nu in (1, -1))
        return num / (2 * (2 + eta * eta))

    def state_m0(self) -> np.ndarray:
        psi = np.zeros(9)
        psi[0 * 3 + 2] = self.gamma_plus   # |1, -1>
        psi[1 * 3 + 1] = self.gamma_zero   # |0, 0>
        psi[2 * 3 + 0] = self.gamma_minus  # |-1, 1>
        return psi

    def state_m1(self, sign: int = 1) -> np.ndarray:
        a = self.alpha_plus if sign > 0 else self.alpha_minus
        psi = np.zeros(9)
        if sign > 0:
            psi[0 * 3 + 1] = math.cos(a)   # |1, 0>
            psi[1 * 3 + 0] = math.sin(a)   # |0, 1>
        else:
            psi[2 * 3 + 1] = math.cos(a)   # |-1, 0>
            psi[1 * 3 + 2] = math.sin(a)   # |0, -1>
        return psi


def spin_one_analytics(eta: float) -> SpinOneAnalytics:
    root = math.sqrt(1 + eta * eta / 4)
    r0 = eta - math.sqrt(2 + eta * eta)
    rm = 1 + eta * r0
    norm = math.sqrt(1 + r0 * r0 + rm * rm)
    return SpinOneAnalytics(
        eta=eta,
        alpha_plus=math.atan(eta / 2 - root),
        alpha_minus=math.atan(-eta / 2 - root),
        gamma_plus=1 / norm, gamma_zero=r0 / norm, gamma_minus=rm / norm)


def negativity_via_reduced(psi, two_s: int) -> float:
    """Pure-state negativity from the one-spin reduced state, (Tr sqrt(rho1))^2."""
    psi = _check_state_vector(psi, two_s)
    rho1 = reduced_state(np.outer(psi, psi), 1, two_s)
    tr = float(np.sum(np.sqrt(np.clip(eig_sym_dense(rho1).eigenvalues, 0.0, None))))
    return 0.5 * (tr * tr - 1.0)
