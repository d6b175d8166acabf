"""
横向模块

冻结纵向坐标的横向谱问题，以及沿 x 的能级支追踪。
"""

from .confinement import (
    ConfinementModel,
    Harmonic,
    PowerWell,
    RigidWall,
    Tabulated,
    TransverseOperator,
    as_profile,
    suggest_y_window,
    transverse_operator,
)
from .branches import (
    BranchDerivatives,
    TermBranch,
    TransverseSolution,
    branch_orthonormality,
    branch_x_derivatives,
    sample_potential,
    solve_transverse_at_x,
    solve_window,
    track_branches,
)

__all__ = [
    'ConfinementModel', 'Harmonic', 'PowerWell', 'RigidWall', 'Tabulated',
    'TransverseOperator', 'as_profile', 'suggest_y_window', 'transverse_operator',
    'BranchDerivatives', 'TermBranch', 'TransverseSolution', 'branch_orthonormality',
    'branch_x_derivatives', 'sample_potential', 'solve_transverse_at_x', 'solve_window',
    'track_branches',
]
