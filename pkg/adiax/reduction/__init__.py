"""
约化模块

有效哈密顿量、一阶修正 L₁/χ₁、几何势、μ–h 区间分类、本质哈密顿量与约化定态求解。
"""

from .family import BranchTerm, OperatorFamily, TermSource, as_term_source, waveguide_family
from .effective import EffectiveHamiltonian, effective_hamiltonian, geometric_potential, sample_on_grid
from .corrections import (
    Chi1Samples,
    CorrectionL1,
    L1Polynomial,
    PolynomialL1,
    correction_chi1,
    correction_L1,
)
from .regimes import (
    REGIME_EXPONENTS,
    EffectiveModel,
    EssentialHamiltonian,
    Regime,
    accuracy_bound,
    assemble_essential,
    build_effective_model,
    classify_regime,
    h_for_regime,
    required_expansion_order,
)
from .stationary import ReducedSpectrum, hermiticity_defect, reduced_operator_bands, solve_reduced_stationary
from .waveguide import chi_symbol, hamiltonian_symbol, l_symbol

__all__ = [
    'BranchTerm', 'OperatorFamily', 'TermSource', 'as_term_source', 'waveguide_family',
    'EffectiveHamiltonian', 'effective_hamiltonian', 'geometric_potential', 'sample_on_grid',
    'Chi1Samples', 'CorrectionL1', 'L1Polynomial', 'PolynomialL1', 'correction_chi1', 'correction_L1',
    'REGIME_EXPONENTS', 'EffectiveModel', 'EssentialHamiltonian', 'Regime', 'accuracy_bound',
    'assemble_essential', 'build_effective_model', 'classify_regime', 'h_for_regime',
    'required_expansion_order',
    'ReducedSpectrum', 'hermiticity_defect', 'reduced_operator_bands', 'solve_reduced_stationary',
    'chi_symbol', 'hamiltonian_symbol', 'l_symbol',
]
