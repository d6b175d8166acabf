"""
Bloch约化模块

快振荡周期势的准动量、色散关系、能隙检查与Bloch有效哈密顿量。
"""

from .potential import PeriodicPotential, quasimomentum
from .bands import (
    DEFAULT_N_PW,
    DEFAULT_P_NODES,
    BlochBand,
    band_gap_check,
    bloch_bands_fourier,
    bloch_discriminant_oracle,
    bloch_matrix,
    compute_bloch_bands,
    discriminant_band_edges,
    effective_mass,
    fourier_band_edges,
)
from .effective import (
    BlochEffectiveHamiltonian,
    BlochTerm,
    bloch_family,
    chi0_bloch,
    effective_hamiltonian_bloch,
    periodic_y_grid,
)

__all__ = [
    'PeriodicPotential', 'quasimomentum',
    'DEFAULT_N_PW', 'DEFAULT_P_NODES', 'BlochBand', 'band_gap_check', 'bloch_bands_fourier',
    'bloch_discriminant_oracle',
    'bloch_matrix', 'compute_bloch_bands', 'discriminant_band_edges', 'effective_mass', 'fourier_band_edges',
    'BlochEffectiveHamiltonian', 'BlochTerm', 'bloch_family', 'chi0_bloch', 'effective_hamiltonian_bloch',
    'periodic_y_grid',
]
