"""Ground states and Gibbs states of the block Hamiltonian."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .linalg import DimensionError, sym_matrix
from .model import BlockHamiltonian

DEFAULT_TOL_DEG = 1e-9


class GroundStateMember(NamedTuple):
    M: int
    index: int
    vector: np.ndarray  # in the full product basis


@dataclass(frozen=True)
class GroundStateInfo:
    energy: float
    degeneracy: int
    members: list = field(repr=False)
    tol_deg: float = DEFAULT_TOL_DEG

    @property
    def magnetizations(self) -> list[int]:
        return sorted({m.M for m in self.members})


@dataclass(frozen=True)
class DensityMatrix:
    """Real symmetric unit-trace state over the (2s+1)^2 product basis."""

    matrix: np.ndarray
    two_s: int
    block_diagonal: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def ground_state(H: BlockHamiltonian,
                 tol_deg: float = DEFAULT_TOL_DEG) -> GroundStateInfo:
    """Lowest energy over all blocks and every state within the tolerance.

    A level belongs to the ground manifold when it lies within
    ``tol_deg * (1 + |E0|)`` of the global minimum E0.
    """
    e0 = min(float(ev[0]) for ev in H.block_eigenvalues.values())
    window = tol_deg * (1.0 + abs(e0))
    members = []
    for M in H.magnetizations:
        if H.block_eigenvalues[M][0] - e0 > window:
            continue
        spec = H.spectra[M]
        for k, e in enumerate(spec.eigenvalues):
            if e - e0 > window:
                break
            members.append(GroundStateMember(M, k, H.embed(M, spec.eigenvectors[:, k])))
    return GroundStateInfo(e0, len(members), members, tol_deg)


def ground_magnetization(H: BlockHamiltonian,
                         tol_deg: float = DEFAULT_TOL_DEG) -> tuple[int, int]:
    """(|M|, degeneracy) of the ground manifold, from eigenvalues only.

    Ties within the tolerance resolve to the smallest |M|.
    """
    lows = {M: float(ev[0]) for M, ev in H.block_eigenvalues.items()}
    e0 = min(lows.values())
    window = tol_deg * (1.0 + abs(e0))
    deg = 0
    best = None
    for M, ev in H.block_eigenvalues.items():
        n = int(np.count_nonzero(ev - e0 <= window))
        if n:
            deg += n
            if best is None or abs(M) < best:
                best = abs(M)
    return best, deg


class GibbsBlock(NamedTuple):
    M: int
    indices: np.ndarray
    log_scale: float      # log of the factor multiplying ``matrix``, before 1/Z
    matrix: np.ndarray    # V diag(exp(-beta (E - E_min,M))) V^T


@dataclass(frozen=True)
class GibbsBlocks:
    """exp(-beta H) stored per block with separate log scales.

    Keeps every entry representable at temperatures where plain
    exp(-beta E) would underflow. ``log_z`` is log Tr exp(-beta H).
    """

    two_s: int
    beta: float
    log_z: float
    blocks: list = field(repr=False)

    @property
    def dim(self) -> int:
        return (self.two_s + 1) ** 2

    def density_matrix(self) -> DensityMatrix:
        rho = np.zeros((self.dim, self.dim))
        for b in self.blocks:
            rho[np.ix_(b.indices, b.indices)] = np.exp(b.log_scale - self.log_z) * b.matrix
        return DensityMatrix(sym_matrix(rho), self.two_s, block_diagonal=True)

    def log_entries(self):
        """Dense (log scale, scaled value) pair; rho = exp(L - log_z) * S."""
        L = np.full((self.dim, self.dim), -np.inf)
        S = np.zeros((self.dim, self.dim))
        for b in self.blocks:
            ix = np.ix_(b.indices, b.indices)
            L[ix] = b.log_scale
            S[ix] = b.matrix
        return L, S


def gibbs_blocks(H: BlockHamiltonian, T: float) -> GibbsBlocks:
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    beta = 1.0 / T
    blocks = []
    log_parts = []
    for M in H.magnetizations:
        spec = H.spectra[M]
        e = spec.eigenvalues
        w = np.exp(-beta * (e - e[0]))
        v = spec.eigenvectors
        blocks.append(GibbsBlock(M, H.indices[M], -beta * e[0], (v * w) @ v.T))
        log_parts.append(-beta * e[0] + np.log(np.sum(w)))
    log_parts = np.array(log_parts)
    top = log_parts.max()
    log_z = float(top + np.log(np.sum(np.exp(log_parts - top))))
    return GibbsBlocks(H.two_s, beta, log_z, blocks)


def thermal_state(H: BlockHamiltonian, T: float,
                  tol_deg: float = DEFAULT_TOL_DEG) -> DensityMatrix:
    """Gibbs state exp(-H/T)/Z; at T = 0 the uniform ground-manifold mixture."""
    if T < 0:
        raise ValueError(f"temperature must be non-negative, got {T}")
    if T == 0:
        gs = ground_state(H, tol_deg)
        vecs = np.array([m.vector for m in gs.members])
        rho = vecs.T @ vecs / gs.degeneracy
        return DensityMatrix(sym_matrix(rho), H.two_s, block_diagonal=True)
    return gibbs_blocks(H, T).density_matrix()


def reduced_state(rho, site: int, two_s: int) -> np.ndarray:
    """Partial trace over the other spin; ``site`` is 1 or 2."""
    m = np.asarray(rho, dtype=float)
    d = two_s + 1
    if m.shape != (d * d, d * d):
        raise DimensionError(f"state of shape {m.shape} is not a spin-{two_s}/2 pair")
    t = m.reshape(d, d, d, d)
    if site == 1:
        out = np.einsum("ajbj->ab", t)
    elif site == 2:
        out = np.einsum("jajb->ab", t)
    else:
        raise ValueError("site must be 1 or 2")
    return sym_matrix(out)
