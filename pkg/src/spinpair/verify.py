"""Self-check suite behind ``spinpair verify``.

Each check compares two independent routes to the same quantity (closed
form vs. numerics, block vs. dense, shifted vs. unshifted field) on random
parameter draws.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .linalg import SymTridiag, eig_sym_dense, eig_sym_tridiag
from .measures import (concurrence_wootters, half_spin_analytics, negativity,
                       negativity_pure, maximally_entangled_state,
                       spin_one_analytics)
from .model import (SpinPairParams, build_hamiltonian, dense_hamiltonian,
                    gauge_flip_J)
from .phase import (critical_points, critical_temperature, gs_boundary,
                    gs_magnetization, lemma1_certificates)
from .thermal import thermal_state


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _random_params(rng, max_two_s: int) -> SpinPairParams:
    return SpinPairParams(int(rng.integers(1, max_two_s + 1)), 1.0,
                          rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-3, 3))


def check_solvers(rng, draws):
    worst = 0.0
    for _ in range(draws):
        n = int(rng.integers(1, 10))
        t = SymTridiag(rng.normal(size=n), rng.normal(size=n - 1))
        a = eig_sym_tridiag(t).eigenvalues
        b = eig_sym_dense(t.dense()).eigenvalues
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("tridiagonal vs dense eigenvalues", worst <= 1e-10, f"max err {worst:.2e}")


def check_dm_reduction(rng, draws):
    worst = 0.0
    for _ in range(draws):
        p = _random_params(rng, 4)
        p = SpinPairParams(p.two_s, rng.uniform(-2, 2), p.Jz, p.h1, p.h2, D=rng.uniform(-2, 2))
        dense = np.linalg.eigvalsh(dense_hamiltonian(p))
        block = build_hamiltonian(p.reduced()).eigenvalues()
        worst = max(worst, float(np.max(np.abs(dense - block))))
    return CheckResult("DM coupling folds into J", worst <= 1e-10, f"max err {worst:.2e}")


def check_gauge(rng, draws):
    failures = 0
    for _ in range(draws):
        _, cert = gauge_flip_J(_random_params(rng, 4))
        failures += not cert.passed
    return CheckResult("J -> -J gauge", failures == 0, f"{failures} failures")


def check_lemma1(rng, draws):
    failures = 0
    worst_id = worst_det = 0.0
    for _ in range(draws):
        p = _random_params(rng, 4)
        T = rng.uniform(1e-3, 5.0)
        rep = lemma1_certificates(p, T, rng.uniform(-5, 5))
        worst_id = max(worst_id, rep.identity_error)
        worst_det = max(worst_det, rep.det_rel_error)
        failures += not rep.passed()
    return CheckResult("average-field shift of rho^t2", failures == 0,
                       f"{failures} failures, identity {worst_id:.1e}, det {worst_det:.1e}")


def check_wootters(rng, draws):
    worst = 0.0
    for _ in range(draws):
        p = _random_params(rng, 1)
        T = rng.uniform(0.05, 5.0)
        c_num = concurrence_wootters(thermal_state(build_hamiltonian(p), T))
        c_closed = half_spin_analytics(p, T).concurrence()
        worst = max(worst, abs(c_num - c_closed))
    return CheckResult("Wootters vs closed-form concurrence", worst <= 1e-12, f"max err {worst:.2e}")


def check_pure_negativity(rng, draws):
    worst = 0.0
    for _ in range(draws):
        two_s = int(rng.integers(1, 7))
        psi = rng.normal(size=(two_s + 1) ** 2)
        psi /= np.linalg.norm(psi)
        worst = max(worst, abs(negativity_pure(psi, two_s) - negativity(np.outer(psi, psi), two_s)))
    return CheckResult("pure-state negativity formula", worst <= 1e-10, f"max err {worst:.2e}")


def check_boundary(n: int = 41):
    axis = np.linspace(-6, 6, n)
    bad = 0
    for two_s in (1, 2, 4):
        for jz in (1.0, -0.5, -1.0, -1.5):
            for a in axis:
                for b in axis:
                    p = SpinPairParams(two_s, 1.0, jz, a, b)
                    v = gs_boundary(p)
                    if abs(v.margin) <= 1e-9:
                        continue
                    bad += v.entangled_gs != (gs_magnetization(p, 1e-12)[0] < two_s)
    return CheckResult("ground-state boundary vs diagonalisation", bad == 0, f"{bad} disagreements")


def check_anchors():
    errs = []
    one = spin_one_analytics(0.0)
    errs.append(abs(negativity_pure(one.state_m1(), 2) - 0.5))
    errs.append(abs(negativity_pure(one.state_m0(), 2) - (1 + 2 * math.sqrt(2)) / 4))
    for two_s in range(1, 7):
        errs.append(abs(negativity_pure(maximally_entangled_state(two_s), two_s) - two_s / 2))
    worst = max(errs)
    return CheckResult("negativity anchors", worst <= 1e-10, f"max err {worst:.2e}")


def check_critical_temperatures():
    targets = {1: (0.5673, 1e-3), 2: (0.864, 2e-3), 4: (1.498, 2e-3)}
    got = {k: critical_temperature(k, 1.0, 0.0) for k in targets}
    ok = all(abs(got[k] - v) <= tol for k, (v, tol) in targets.items())
    return CheckResult("critical temperatures at Jz = 0", ok,
                       ", ".join(f"s={k / 2:g}: {got[k]:.4f}" for k in got))


def check_critical_point():
    info = critical_points(4, 1.0, -1.2)
    ok = info.numeric_degeneracy == 9 and abs(info.numeric_energy + 4.8) <= 1e-9
    return CheckResult("critical-point degeneracy (s=2, Jz=-1.2)", ok,
                       f"{info.numeric_degeneracy} states at {info.numeric_energy:.12f}")


def run_certificates(draws: int = 100, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [
        check_solvers(rng, draws),
        check_dm_reduction(rng, draws),
        check_gauge(rng, draws),
        check_lemma1(rng, draws),
        check_wootters(rng, draws),
        check_pure_negativity(rng, draws),
        check_boundary(),
        check_anchors(),
        check_critical_temperatures(),
        check_critical_point(),
    ]
