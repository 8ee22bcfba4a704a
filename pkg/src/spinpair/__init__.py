"""Exact numerics for entanglement and coherence of a spin-s XXZ pair
in non-uniform transverse fields."""

__version__ = "0.1.0"

from .linalg import (SpectralDecomposition, SymTridiag, eig_sym_dense,
                     eig_sym_tridiag, partial_transpose, trace_norm_negativity)
from .measures import (concurrence_pure_psi, concurrence_wootters,
                       coherence_asymptotic, entanglement_entropy_pure,
                       eof_from_concurrence, half_spin_analytics, negativity,
                       negativity_pure, rel_entropy_coherence,
                       spin_one_analytics)
from .model import (BlockHamiltonian, SpinPairParams, build_hamiltonian,
                    gauge_flip_J, reduce_couplings, spin_matrices)
from .phase import (NonBracketingError, critical_points, critical_temperature,
                    gs_boundary, gs_magnetization_map, jz_threshold,
                    lemma1_certificates, stripe_width)
from .thermal import (DensityMatrix, ground_state, reduced_state,
                      thermal_state)

__all__ = [
    "BlockHamiltonian", "DensityMatrix", "NonBracketingError",
    "SpectralDecomposition", "SpinPairParams", "SymTridiag",
    "build_hamiltonian", "coherence_asymptotic", "concurrence_pure_psi",
    "concurrence_wootters", "critical_points", "critical_temperature",
    "eig_sym_dense", "eig_sym_tridiag", "entanglement_entropy_pure",
    "eof_from_concurrence", "gauge_flip_J", "ground_state", "gs_boundary",
    "gs_magnetization_map", "half_spin_analytics", "jz_threshold",
    "lemma1_certificates", "negativity", "negativity_pure",
    "partial_transpose", "reduce_couplings", "reduced_state",
    "rel_entropy_coherence", "spin_matrices", "spin_one_analytics",
    "stripe_width", "thermal_state", "trace_norm_negativity",
]
