"""Spin-s XXZ pair in a non-uniform transverse field.

    H = -h1 s1z - h2 s2z + J (s1x s2x + s1y s2y) + Jz s1z s2z

H commutes with the total magnetization Sz = s1z + s2z, so it is stored as
one real tridiagonal block per magnetization M. Single-spin states are
labelled by k = s - m (k = 0 is m = +s); the product basis index of
|m1, m2> is k1 * (2s + 1) + k2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .linalg import (SpectralDecomposition, SymTridiag, eig_sym_tridiag,
                     eigvalsh_tridiag)


@dataclass(frozen=True)
class SpinPairParams:
    """Physical parameters of the pair, all in one energy unit (k = 1).

    ``two_s`` is twice the spin so that half-integer spins stay integral.
    ``D`` is an optional Dzyaloshinskii-Moriya coupling along z; it is folded
    into ``J`` by :meth:`reduced`.
    """

    two_s: int
    J: float
    Jz: float
    h1: float = 0.0
    h2: float = 0.0
    D: float = 0.0

    def __post_init__(self):
        if int(self.two_s) != self.two_s or self.two_s < 1:
            raise ValueError(f"two_s must be a positive integer, got {self.two_s}")
        object.__setattr__(self, "two_s", int(self.two_s))
        for name in ("J", "Jz", "h1", "h2", "D"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def dim(self) -> int:
        return self.two_s + 1

    def with_fields(self, h1: float, h2: float) -> SpinPairParams:
        return replace(self, h1=h1, h2=h2)

    def reduced(self) -> SpinPairParams:
        """Equivalent parameters with D = 0 and J > 0."""
        j_eff, _ = reduce_couplings(self.J, self.D)
        return replace(self, J=j_eff, D=0.0)


class DerivedScales(NamedTuple):
    eta: float
    Delta: float
    h_avg: float


def derived_scales(p: SpinPairParams) -> DerivedScales:
    dh = p.h1 - p.h2
    return DerivedScales(dh / p.J, math.hypot(dh, p.J), 0.5 * (p.h1 + p.h2))


class SpinMatrices(NamedTuple):
    sz: np.ndarray
    splus_offdiag: np.ndarray


def spin_matrices(two_s: int) -> SpinMatrices:
    """Diagonal of s_z and the superdiagonal of s_+ in the k = s - m basis.

    ``splus_offdiag[k - 1] = <m + 1| s_+ |m>`` for m = s - k.
    """
    if two_s < 1:
        raise ValueError("two_s must be >= 1")
    s = two_s / 2
    m = s - np.arange(two_s + 1)
    splus = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
    return SpinMatrices(m, splus)


def dense_spin_operators(two_s: int):
    """Dense single-site (sz, s+, s-); all real."""
    sm = spin_matrices(two_s)
    sz = np.diag(sm.sz)
    sp = np.diag(sm.splus_offdiag, 1)
    return sz, sp, sp.T.copy()


def reduce_couplings(J: float, D: float) -> tuple[float, float]:
    """Fold a z-axis DM coupling into the XY exchange.

    A rotation of the second spin by ``phi = atan2(D, J)`` about z maps
    J (xx + yy) + D (xy - yx) onto sqrt(J^2 + D^2) (xx + yy).
    """
    if J == 0.0 and D == 0.0:
        raise ValueError("J and D cannot both vanish")
    return math.hypot(J, D), math.atan2(D, J)


@dataclass(frozen=True, eq=False)
class BlockHamiltonian:
    """H split into fixed-magnetization tridiagonal blocks.

    ``blocks[M]`` acts on ``basis[M]``, the pairs (m1, M - m1) with m1
    descending. ``indices[M]`` gives their positions in the product basis.
    """

    params: SpinPairParams
    blocks: dict = field(repr=False)
    basis: dict = field(repr=False)
    indices: dict = field(repr=False)

    @property
    def two_s(self) -> int:
        return self.params.two_s

    @property
    def dim(self) -> int:
        return (self.params.two_s + 1) ** 2

    @property
    def magnetizations(self) -> list[int]:
        return sorted(self.blocks)

    @cached_property
    def spectra(self) -> dict[int, SpectralDecomposition]:
        return {M: eig_sym_tridiag(b) for M, b in self.blocks.items()}

    @cached_property
    def block_eigenvalues(self) -> dict[int, np.ndarray]:
        if "spectra" in self.__dict__:
            return {M: sp.eigenvalues for M, sp in self.spectra.items()}
        return {M: eigvalsh_tridiag(b) for M, b in self.blocks.items()}

    def dense(self) -> np.ndarray:
        h = np.zeros((self.dim, self.dim))
        for M, block in self.blocks.items():
            idx = self.indices[M]
            h[np.ix_(idx, idx)] = block.dense()
        return h

    def embed(self, M: int, vec) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices[M]] = vec
        return out

    def eigenvalues(self) -> np.ndarray:
        """Full spectrum, ascending."""
        return np.sort(np.concatenate(list(self.block_eigenvalues.values())),
                       kind="stable")


def build_hamiltonian(p: SpinPairParams) -> BlockHamiltonian:
    """Assemble the magnetization blocks of H.

    Off-diagonal elements link |m1, m2> to |m1 - 1, m2 + 1> with amplitude
    (J/2) sqrt(s(s+1) - m1(m1-1)) sqrt(s(s+1) - m2(m2+1)).
    """
    if p.D != 0.0:
        raise ValueError("reduce the DM coupling first (SpinPairParams.reduced)")
    two_s = p.two_s
    d = two_s + 1
    s = two_s / 2
    cas = s * (s + 1)
    blocks, basis, indices = {}, {}, {}
    for M in range(-two_s, two_s + 1):
        # k1 + k2 = 2s - M with both in [0, 2s]; descending m1 = ascending k1
        total = two_s - M
        k1s = [k for k in range(d) if 0 <= total - k <= two_s]
        m1 = np.array([s - k for k in k1s])
        m2 = M - m1
        diag = -p.h1 * m1 - p.h2 * m2 + p.Jz * m1 * m2
        off = 0.5 * p.J * np.sqrt(cas - m1[:-1] * (m1[:-1] - 1)) \
            * np.sqrt(cas - m2[:-1] * (m2[:-1] + 1))
        blocks[M] = SymTridiag(diag, off)
        basis[M] = list(zip(m1.tolist(), m2.tolist()))
        indices[M] = np.array([k * d + (total - k) for k in k1s])
    return BlockHamiltonian(p, blocks, basis, indices)


def dense_hamiltonian(p: SpinPairParams) -> np.ndarray:
    """H built from Kronecker products, including the DM term if present.

    With D != 0 the matrix is complex Hermitian. Used as an independent
    construction for cross-checks.
    """
    sz, sp, sm = dense_spin_operators(p.two_s)
    eye = np.eye(p.two_s + 1)
    kron = np.kron
    h = (-p.h1 * kron(sz, eye) - p.h2 * kron(eye, sz)
         + 0.5 * p.J * (kron(sp, sm) + kron(sm, sp))
         + p.Jz * kron(sz, sz))
    if p.D != 0.0:
        # s1x s2y - s1y s2x = (i/2)(s1+ s2- - s1- s2+)
        h = h + 0.5j * p.D * (kron(sp, sm) - kron(sm, sp))
    return h


def total_sz(two_s: int) -> np.ndarray:
    """Diagonal of S_z = s1z + s2z in the product basis."""
    m = spin_matrices(two_s).sz
    return (m[:, None] + m[None, :]).reshape(-1)


def site_sign_flip(two_s: int) -> np.ndarray:
    """Diagonal of the pi rotation about z on spin 2, up to a global phase."""
    k = np.arange(two_s + 1)
    r = np.where(k % 2 == 0, 1.0, -1.0)
    return np.kron(np.ones(two_s + 1), r)


class GaugeCertificate(NamedTuple):
    spectrum_error: float
    entropy_error: float

    @property
    def passed(self) -> bool:
        return self.spectrum_error <= 1e-12 and self.entropy_error <= 1e-10


def _schmidt_entropy(vec: np.ndarray, d: int) -> float:
    sv = np.linalg.svd(vec.reshape(d, d), compute_uv=False)
    p = sv ** 2
    p = p[p > 1e-14]
    return float(-np.sum(p * np.log2(p)))


def gauge_flip_J(p: SpinPairParams) -> tuple[SpinPairParams, GaugeCertificate]:
    """Map J -> |J| and certify the equivalence of the two Hamiltonians.

    The certificate compares the full spectra of H(J) and H(-J) and the
    entanglement entropies of corresponding eigenstates, block by block.
    """
    if p.J == 0.0:
        raise ValueError("J must be non-zero")
    flipped = replace(p, J=-p.J)
    ha, hb = build_hamiltonian(p), build_hamiltonian(flipped)
    spec_err = float(np.max(np.abs(ha.eigenvalues() - hb.eigenvalues())))
    ent_err = 0.0
    d = p.two_s + 1
    for M in ha.magnetizations:
        sa, sb = ha.spectra[M], hb.spectra[M]
        spec_err = max(spec_err, float(np.max(np.abs(sa.eigenvalues - sb.eigenvalues))))
        for k in range(sa.eigenvalues.size):
            ea = _schmidt_entropy(ha.embed(M, sa.eigenvectors[:, k]), d)
            eb = _schmidt_entropy(hb.embed(M, sb.eigenvectors[:, k]), d)
            ent_err = max(ent_err, abs(ea - eb))
    return replace(p, J=abs(p.J)), GaugeCertificate(spec_err, ent_err)
