"""Phase boundaries, limit temperatures and separability stripes.

Ground-state results come from level crossings between the aligned
|M| = 2s state and the lowest |M| = 2s - 1 state. Thermal results use the
sign of the lowest eigenvalue of the partial transpose; the field average
drops out of that sign, so every stripe search runs along h1 = -h2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import mpmath
import numpy as np

from .linalg import partial_transpose
from .model import SpinPairParams, build_hamiltonian, total_sz
from .thermal import (DEFAULT_TOL_DEG, GibbsBlocks, ground_magnetization,
                      ground_state, gibbs_blocks, thermal_state)

BISECT_ABS_TOL = 1e-10
BISECT_REL_TOL = 1e-10
_EXP_CAP = 700.0


class NonBracketingError(RuntimeError):
    """A root search could not find a sign change within its search window."""


# ---------------------------------------------------------------- T = 0

class BoundaryVerdict(NamedTuple):
    entangled_gs: bool
    binding_inequality: str  # "c1-hyperbola" (h1+h2 > 0), "c2-hyperbola" (< 0), "c0-upper" (= 0)
    margin: float


def boundary_margin(two_s: int, J: float, Jz: float, h1: float, h2: float) -> float:
    """2s Jz + sqrt(4 s^2 J^2 + (h1 - h2)^2) - |h1 + h2|; positive inside."""
    return two_s * Jz + math.hypot(two_s * J, h1 - h2) - abs(h1 + h2)


def gs_boundary(p: SpinPairParams) -> BoundaryVerdict:
    """Whether the ground state is entangled, from the aligned-state crossing."""
    margin = boundary_margin(p.two_s, p.J, p.Jz, p.h1, p.h2)
    total = p.h1 + p.h2
    tag = "c1-hyperbola" if total > 0 else "c2-hyperbola" if total < 0 else "c0-upper"
    return BoundaryVerdict(margin > 0, tag, margin)


def gs_magnetization(p: SpinPairParams, tol_deg: float = DEFAULT_TOL_DEG) -> tuple[int, int]:
    """(|M|, degeneracy) of the exact ground manifold; ties go to lower |M|."""
    return ground_magnetization(build_hamiltonian(p), tol_deg)


class MagnetizationMap(NamedTuple):
    h1: np.ndarray
    h2: np.ndarray
    abs_m: np.ndarray        # shape (len(h1), len(h2))
    degeneracy: np.ndarray


def gs_magnetization_map(two_s: int, J: float, Jz: float, h1_axis, h2_axis,
                         tol_deg: float = DEFAULT_TOL_DEG) -> MagnetizationMap:
    h1_axis = np.asarray(h1_axis, dtype=float)
    h2_axis = np.asarray(h2_axis, dtype=float)
    if h1_axis.size < 2 or h2_axis.size < 2:
        raise ValueError("grid needs at least two points per axis")
    base = SpinPairParams(two_s, J, Jz)
    abs_m = np.zeros((h1_axis.size, h2_axis.size), dtype=int)
    deg = np.zeros_like(abs_m)
    for i, a in enumerate(h1_axis):
        for j, b in enumerate(h2_axis):
            abs_m[i, j], deg[i, j] = gs_magnetization(base.with_fields(a, b), tol_deg)
    return MagnetizationMap(h1_axis, h2_axis, abs_m, deg)


def boundary_curve(two_s: int, J: float, Jz: float, dh_values) -> np.ndarray:
    """Rows (h1 - h2, limit on |h1 + h2|, h1+, h2+, h1-, h2-).

    The entangled sector at field difference dh is |h1 + h2| < limit; the
    last four columns are the two boundary points. Where the limit is not
    positive the sector is empty and the points are NaN.
    """
    rows = []
    for dh in np.asarray(dh_values, dtype=float):
        lim = two_s * Jz + math.hypot(two_s * J, dh)
        if lim > 0:
            pts = [(lim + dh) / 2, (lim - dh) / 2, (-lim + dh) / 2, (-lim - dh) / 2]
        else:
            pts = [math.nan] * 4
        rows.append([dh, lim, *pts])
    return np.array(rows)


@dataclass(frozen=True)
class CriticalPointInfo:
    locations: tuple
    h_c: float
    degeneracy: int
    energy: float
    numeric_degeneracy: int
    numeric_energy: float
    tol_deg: float


def critical_points(two_s: int, J: float, Jz: float,
                    tol_deg: float = DEFAULT_TOL_DEG) -> CriticalPointInfo:
    """Points h1 = -h2 = +-h_c/2 where all 4s + 1 magnetizations meet (Jz < -J)."""
    if not Jz < -abs(J):
        raise ValueError("critical points exist only for Jz < -|J|")
    s = two_s / 2
    h_c = two_s * math.sqrt(Jz * Jz - J * J)
    locs = ((h_c / 2, -h_c / 2), (-h_c / 2, h_c / 2))
    gs = ground_state(build_hamiltonian(SpinPairParams(two_s, J, Jz, *locs[0])), tol_deg)
    return CriticalPointInfo(locs, h_c, 2 * two_s + 1, s * s * Jz,
                             gs.degeneracy, gs.energy, tol_deg)


# ---------------------------------------------------------------- T > 0

def _log_sinh(x: float) -> float:
    return x + math.log1p(-math.exp(-2 * x)) - math.log(2)


def _bisect(pred, lo: float, hi: float, abs_tol: float, rel_tol: float = 0.0):
    """Shrink [lo, hi] with pred(lo) False and pred(hi) True."""
    while hi - lo > max(abs_tol, rel_tol * abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def scaled_partial_transpose(g: GibbsBlocks):
    """D^{-1/2} rho^{t2} D^{-1/2} with D = diag(rho^{t2}), and log diag(rho^{t2}).

    Congruence by a positive diagonal keeps the inertia, so the lowest
    eigenvalue of the scaled matrix has the sign of that of rho^{t2}, and
    its entries stay O(1) at any temperature. Product states whose diagonal
    weight underflows even in log form are dropped.
    """
    d = g.two_s + 1
    L, S = g.log_entries()
    with np.errstate(divide="ignore"):
        log_diag = np.diag(L) + np.log(np.diag(S)) - g.log_z
    keep = np.isfinite(log_diag)
    Lt = partial_transpose(np.where(np.isfinite(L), L, 0.0), d, d)
    mask = partial_transpose(np.isfinite(L).astype(float), d, d) > 0
    St = partial_transpose(S, d, d)
    expo = Lt - g.log_z - 0.5 * (log_diag[:, None] + log_diag[None, :])
    expo = np.minimum(np.where(mask, expo, -np.inf), _EXP_CAP)
    with np.errstate(invalid="ignore"):
        Y = np.where(mask, St * np.exp(expo), 0.0)
    Y = Y[np.ix_(keep, keep)]
    return 0.5 * (Y + Y.T), log_diag[keep]


def pt_min_eigenvalue(p: SpinPairParams, T: float) -> float:
    """Lowest eigenvalue of the diagonally scaled partial transpose at T > 0.

    Negative exactly when the thermal state has non-zero negativity.
    """
    Y, _ = scaled_partial_transpose(gibbs_blocks(build_hamiltonian(p), T))
    return float(np.linalg.eigvalsh(Y)[0])


def thermal_npt(p: SpinPairParams, T: float) -> bool:
    return pt_min_eigenvalue(p, T) < 0.0


def jz_threshold(T: float, J: float, dh: float) -> float:
    """Jz above which the spin-1/2 thermal state is entangled."""
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    delta = math.hypot(dh, J)
    return 2 * T * (math.log(delta / abs(J)) - _log_sinh(delta / (2 * T)))


def _half_spin_npt_margin(T: float, J: float, Jz: float, dh: float) -> float:
    """log of (J/Delta) e^{Jz/2T} sinh(Delta/2T); positive when entangled."""
    delta = math.hypot(dh, J)
    return math.log(abs(J) / delta) + Jz / (2 * T) + _log_sinh(delta / (2 * T))


def _inverse_sinhc(log_y: float) -> float:
    """x > 0 with log(sinh(x)/x) = log_y (log_y > 0)."""
    def log_f(x):
        return _log_sinh(x) - math.log(x)
    hi = 1.0
    while log_f(hi) < log_y:
        hi *= 2.0
    lo, hi = _bisect(lambda x: log_f(x) >= log_y, 0.0, hi, 0.0, 1e-15)
    return 0.5 * (lo + hi)


class StripeResult(NamedTuple):
    h_c: float
    T: float
    method: str  # "analytic-s-half" or "bisection-negativity"
    bracket: tuple


def _stripe_half_spin(J: float, Jz: float, T: float) -> StripeResult:
    log_y = math.log(2 * T / abs(J)) - Jz / (2 * T)
    if log_y <= 0:
        return StripeResult(0.0, T, "analytic-s-half", (0.0, 0.0))
    delta_c = 2 * T * _inverse_sinhc(log_y)
    h_c = math.sqrt(delta_c ** 2 - J ** 2) if delta_c > abs(J) else 0.0
    return StripeResult(h_c, T, "analytic-s-half", (h_c, h_c))


def _search_cap(two_s: int, J: float, Jz: float, T: float) -> float:
    return 20 * (two_s / 2) * max(abs(J), abs(Jz), T)


def stripe_width(two_s: int, J: float, Jz: float, T: float,
                 method: str = "auto") -> StripeResult:
    """Half-width h_c of the separability stripe |h1 - h2| <= h_c at T > 0.

    ``method`` is "analytic" (s = 1/2 only), "numeric" (partial-transpose
    bisection along h1 = -h2) or "auto" (analytic when available).
    """
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    if method not in ("auto", "analytic", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if method == "analytic" or (method == "auto" and two_s == 1):
        if two_s != 1:
            raise ValueError("the analytic stripe needs s = 1/2")
        return _stripe_half_spin(J, Jz, T)

    base = SpinPairParams(two_s, J, Jz)

    def entangled(dh):
        return thermal_npt(base.with_fields(dh / 2, -dh / 2), T)

    if entangled(0.0):
        return StripeResult(0.0, T, "bisection-negativity", (0.0, 0.0))
    cap = _search_cap(two_s, J, Jz, T)
    lo, hi = 0.0, max(abs(J), abs(Jz), T)
    while not entangled(hi):
        lo = hi
        hi *= 2.0
        if lo >= cap:
            raise NonBracketingError(
                f"no entangled point along h1 = -h2 up to |h1 - h2| = {lo:g}")
    lo, hi = _bisect(entangled, lo, hi, BISECT_ABS_TOL * abs(J))
    return StripeResult(0.5 * (lo + hi), T, "bisection-negativity", (lo, hi))


def critical_temperature(two_s: int, J: float, Jz: float, method: str = "auto") -> float:
    """Temperature below which the whole field plane is entangled (0 if Jz <= -J)."""
    if method not in ("auto", "analytic", "numeric"):
        raise ValueError(f"unknown method {method!r}")
    if Jz <= -abs(J):
        return 0.0
    if method == "analytic" or (method == "auto" and two_s == 1):
        if two_s != 1:
            raise ValueError("the analytic critical temperature needs s = 1/2")

        # e^{beta Jz/2} sinh(beta J/2) = 1, increasing in beta
        def entangled_beta(beta):
            return beta * Jz / 2 + _log_sinh(beta * abs(J) / 2) > 0

        hi = 1.0 / abs(J)
        while not entangled_beta(hi):
            hi *= 2.0
        lo = 0.0
        lo, hi = _bisect(entangled_beta, lo, hi, 0.0, BISECT_REL_TOL)
        return 2.0 / (lo + hi)

    base = SpinPairParams(two_s, J, Jz)

    def separable(T):
        return not thermal_npt(base, T)

    scale = max(abs(J), abs(Jz))
    lo = scale
    while separable(lo):
        lo *= 0.5
        if lo < 1e-6 * scale:
            raise NonBracketingError("zero-field state is not entangled at low temperature")
    hi = 2.0 * lo
    while not separable(hi):
        lo = hi
        hi *= 2.0
        if hi > 1e3 * scale * two_s:
            raise NonBracketingError("zero-field state stays entangled at high temperature")
    lo, hi = _bisect(separable, lo, hi, 0.0, BISECT_REL_TOL)
    return 0.5 * (lo + hi)


# ------------------------------------------------------- field-average shift

@dataclass(frozen=True)
class Lemma1Report:
    """Checks that shifting the average field only rescales rho^{t2}.

    identity_error: max entrywise gap between rho^{t2}(h) and
        (Z0/Zh) e^{h Sz/2T} rho^{t2}(0) e^{h Sz/2T}.
    det_rel_error: relative gap in det rho^{t2}(h) = (Z0/Zh)^d det rho^{t2}(0).
    sign_zero, sign_shift: sign of the lowest partial-transpose eigenvalue
        (0 when it is within rounding of zero).
    """

    identity_error: float
    det_rel_error: float
    det_sign_match: bool
    sign_zero: int
    sign_shift: int

    @property
    def sign_consistent(self) -> bool:
        return self.sign_zero == self.sign_shift or 0 in (self.sign_zero, self.sign_shift)

    def passed(self, identity_tol: float = 1e-10, det_tol: float = 1e-8) -> bool:
        return (self.identity_error <= identity_tol and self.det_rel_error <= det_tol
                and self.det_sign_match and self.sign_consistent)


def _lowest_pt_sign(g: GibbsBlocks) -> int:
    """Sign of the lowest eigenvalue of rho^{t2}, 0 when within rounding of zero."""
    Y, _ = scaled_partial_transpose(g)
    evals = np.linalg.eigvalsh(Y)
    noise = 1e-12 * max(1.0, float(np.max(np.abs(evals))))
    return 0 if abs(evals[0]) <= noise else int(np.sign(evals[0]))


def _pt_log_det_mp(two_s: int, J: float, Jz: float, half: float, h_avg: float,
                   T: float, dps: int):
    """(log|det rho^{t2}|, sign, log Z) with fields h_avg +- half, at ``dps`` digits.

    rho^{t2} conserves m1 - m2, so the determinant is a product of small
    block determinants.
    """
    with mpmath.workdps(dps):
        s = mpmath.mpf(two_s) / 2
        beta = 1 / mpmath.mpf(T)
        h1 = mpmath.mpf(h_avg) + mpmath.mpf(half)
        h2 = mpmath.mpf(h_avg) - mpmath.mpf(half)
        d = two_s + 1
        ms = [s - k for k in range(d)]
        blocks = []
        for M in range(-two_s, two_s + 1):
            basis = [(k1, k2) for k1 in range(d) for k2 in range(d) if k1 + k2 == two_s - M]
            n = len(basis)
            H = mpmath.zeros(n, n)
            for i, (k1, k2) in enumerate(basis):
                m1, m2 = ms[k1], ms[k2]
                H[i, i] = -h1 * m1 - h2 * m2 + Jz * m1 * m2
                if i + 1 < n:
                    H[i, i + 1] = H[i + 1, i] = (mpmath.mpf(J) / 2
                        * mpmath.sqrt(s * (s + 1) - m1 * (m1 - 1))
                        * mpmath.sqrt(s * (s + 1) - m2 * (m2 + 1)))
            E, Q = mpmath.eigsy(H)
            blocks.append((basis, E, Q))
        e0 = min(min(E) for _, E, _ in blocks)
        rho = {}
        z = mpmath.mpf(0)
        for basis, E, Q in blocks:
            w = [mpmath.exp(-beta * (e - e0)) for e in E]
            z += mpmath.fsum(w)
            for i, a in enumerate(basis):
                for j, b in enumerate(basis):
                    rho[a, b] = mpmath.fsum(Q[i, k] * Q[j, k] * w[k] for k in range(len(w)))
        log_abs, sign = mpmath.mpf(0), 1
        for K in range(-two_s, two_s + 1):
            idx = [(k1, k2) for k1 in range(d) for k2 in range(d) if k2 - k1 == K]
            B = mpmath.matrix(len(idx), len(idx))
            for i, (a1, b1) in enumerate(idx):
                for j, (a2, b2) in enumerate(idx):
                    B[i, j] = rho.get(((a1, b2), (a2, b1)), 0)
            det = mpmath.det(B)
            if det == 0:
                return -mpmath.inf, 0, mpmath.log(z) - beta * e0
            sign *= 1 if det > 0 else -1
            log_abs += mpmath.log(abs(det))
        log_z = mpmath.log(z) - beta * e0
        return log_abs - d * d * mpmath.log(z), sign, log_z


def _pt_log_det(two_s, J, Jz, half, h_avg, T):
    """Extended-precision log-determinant, with digits raised until stable.

    The determinant of rho^{t2} involves cancellations down to
    exp(-beta * spread of energies), far below double precision at low T.
    """
    spread = 2 * (abs(J) + abs(Jz)) * two_s ** 2 + 2 * two_s * (abs(half) + abs(h_avg))
    dps = 30 + int(spread / (T * math.log(10)))
    prev = _pt_log_det_mp(two_s, J, Jz, half, h_avg, T, dps)
    for _ in range(6):
        dps = int(dps * 1.5) + 10
        cur = _pt_log_det_mp(two_s, J, Jz, half, h_avg, T, dps)
        if cur[1] == prev[1] and abs(cur[0] - prev[0]) <= mpmath.mpf(10) ** (-20) * (1 + abs(cur[0])):
            return cur
        prev = cur
    return cur


def lemma1_certificates(p: SpinPairParams, T: float, h_shift: float) -> Lemma1Report:
    """Compare the thermal state at zero average field with one at ``h_shift``.

    The field difference of ``p`` is kept; its average field is replaced by
    0 and by ``h_shift``.
    """
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    half = 0.5 * (p.h1 - p.h2)
    p0 = replace(p, h1=half, h2=-half)
    ph = replace(p, h1=half + h_shift, h2=-half + h_shift)
    d = p.two_s + 1
    beta = 1.0 / T

    g0 = gibbs_blocks(build_hamiltonian(p0), T)
    Hh = build_hamiltonian(ph)
    gh = gibbs_blocks(Hh, T)

    # right-hand side assembled from the zero-field blocks alone, in log form
    log_zm = np.array([b.log_scale + math.log(np.trace(b.matrix)) for b in g0.blocks])
    ms = np.array([b.M for b in g0.blocks], dtype=float)
    shifted = beta * h_shift * ms + log_zm
    top = shifted.max()
    log_zh = float(top + np.log(np.sum(np.exp(shifted - top))))
    L0, S0 = g0.log_entries()
    finite = np.isfinite(L0)
    sz = total_sz(p.two_s)
    Lt = partial_transpose(np.where(finite, L0, 0.0), d, d)
    mask = partial_transpose(finite.astype(float), d, d) > 0
    expo = Lt + 0.5 * beta * h_shift * (sz[:, None] + sz[None, :]) - log_zh
    rhs = np.where(mask, partial_transpose(S0, d, d) * np.exp(np.where(mask, expo, -np.inf)), 0.0)
    lhs = partial_transpose(thermal_state(Hh, T).matrix, d, d)
    identity_error = float(np.max(np.abs(lhs - rhs)))

    ld0, sg0, lz0 = _pt_log_det(p.two_s, p.J, p.Jz, half, 0.0, T)
    ldh, sgh, lzh = _pt_log_det(p.two_s, p.J, p.Jz, half, h_shift, T)
    with mpmath.workdps(30):
        det_rel = float(abs(mpmath.expm1(ldh - (d * d * (lz0 - lzh) + ld0))))
    lam0, lamh = _lowest_pt_sign(g0), _lowest_pt_sign(gh)
    return Lemma1Report(identity_error, det_rel, sg0 == sgh, lam0, lamh)
