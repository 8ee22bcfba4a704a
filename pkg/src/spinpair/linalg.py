"""Real symmetric linear algebra used throughout the package.

Everything here works on real matrices: in the product basis |m1, m2> the
XXZ pair Hamiltonian, its Gibbs states and their partial transposes are all
real symmetric, so no complex arithmetic is needed.

The tridiagonal solver is an implicit QL iteration with Wilkinson-type
shifts (the classical ``tqli`` scheme). Dense matrices are handed to LAPACK
through :func:`numpy.linalg.eigh`.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

_TINY = sys.float_info.min
_EPS = np.finfo(float).eps
_MAX_QL_SWEEPS = 60


class DimensionError(ValueError):
    """Raised when matrix shapes do not match the requested factorisation."""


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix stored as its two diagonals."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).reshape(-1)
        e = np.array(self.offdiag, dtype=float).reshape(-1)
        if d.size < 1:
            raise DimensionError("tridiagonal matrix needs at least one entry")
        if e.size != d.size - 1:
            raise DimensionError(
                f"offdiag has length {e.size}, expected {d.size - 1}")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dim(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        return (np.diag(self.diag) + np.diag(self.offdiag, 1)
                + np.diag(self.offdiag, -1))


class SpectralDecomposition(NamedTuple):
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def tol_eig(a) -> float:
    """Accuracy contract of both eigensolvers for input ``a``."""
    a = np.asarray(a)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    return 1e-12 * (1.0 + scale)


def sym_matrix(a) -> np.ndarray:
    """Return ``a`` as a float array that is exactly symmetric.

    The upper triangle wins, so an input that is already symmetric comes back
    unchanged bit for bit.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


def _ordered(evals: np.ndarray, evecs: np.ndarray) -> SpectralDecomposition:
    # stable sort keeps the original index order among ties
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    evecs = evecs[:, order]
    # deterministic sign: largest-magnitude component (first of ties) positive
    if evecs.size:
        pivot = np.argmax(np.abs(evecs), axis=0)
        signs = np.sign(evecs[pivot, np.arange(evecs.shape[1])])
        signs[signs == 0] = 1.0
        evecs = evecs * signs
    return SpectralDecomposition(evals, evecs)


def _tql(diag, offdiag, vectors: bool):
    n = len(diag)
    d = [float(x) for x in diag]
    e = [float(x) for x in offdiag] + [0.0]
    # z[k] is the k-th column, kept as python lists: n is small here
    z = [[1.0 if r == k else 0.0 for r in range(n)] for k in range(n)] \
        if vectors else None

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                # subnormal couplings count as zero even when the diagonal vanishes
                if abs(e[m]) <= max(_EPS * dd, _TINY):
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_QL_SWEEPS:
                raise RuntimeError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if vectors:
                    zi, zj = z[i], z[i + 1]
                    z[i] = [c * a - s * b_ for a, b_ in zip(zi, zj)]
                    z[i + 1] = [s * a + c * b_ for a, b_ in zip(zi, zj)]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def eig_sym_tridiag(t: SymTridiag) -> SpectralDecomposition:
    """Diagonalise a symmetric tridiagonal matrix by implicit QL.

    Parameters
    ----------
    t : SymTridiag
        Matrix to diagonalise.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues in ascending order with orthonormal eigenvectors as
        columns, in the basis the diagonals were given in.
    """
    d, z = _tql(t.diag, t.offdiag, vectors=True)
    return _ordered(np.array(d), np.array(z).T)


def eigvalsh_tridiag(t: SymTridiag) -> np.ndarray:
    """Eigenvalues only, ascending; same iteration as :func:`eig_sym_tridiag`."""
    d, _ = _tql(t.diag, t.offdiag, vectors=False)
    return np.sort(np.array(d), kind="stable")


def eig_sym_dense(m) -> SpectralDecomposition:
    """Diagonalise a dense real symmetric matrix (LAPACK ``syevd``)."""
    a = sym_matrix(m)
    evals, evecs = np.linalg.eigh(a)
    return _ordered(evals, evecs)


def partial_transpose(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the second tensor factor of an operator on A (x) B.

    ``out[(a, b), (a', b')] = m[(a, b'), (a', b)]``. The map is a pure index
    permutation, so applying it twice returns the input exactly.
    """
    m = np.asarray(m, dtype=float)
    n = dim_a * dim_b
    if m.shape != (n, n):
        raise DimensionError(
            f"matrix of shape {m.shape} is not {dim_a}x{dim_b} bipartite")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b).transpose(0, 3, 2, 1)
    return np.ascontiguousarray(t.reshape(n, n))


def trace_norm_negativity(m) -> float:
    """Minus the sum of the negative eigenvalues of a symmetric matrix."""
    evals = eig_sym_dense(m).eigenvalues
    return float(-np.sum(evals[evals < 0.0])) + 0.0  # no signed zero


def matrix_function(spec: SpectralDecomposition, func) -> np.ndarray:
    """Apply ``func`` to the eigenvalues and rebuild the matrix."""
    v = spec.eigenvectors
    return (v * func(spec.eigenvalues)) @ v.T
