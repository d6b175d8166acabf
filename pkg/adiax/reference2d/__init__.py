"""
二维参考求解器

原始二维方程的有限差分直接解：定态本征对、Crank–Nicolson演化与横向模式投影。
"""

from .grid import Rect2DGrid, Wavefunction2D
from .operator import Eigenpairs2D, Operator2D, assemble_2d, eigs_2d
from .evolution import Evolution2D, evolve_cn, time_reversal_defect
from .modes import mode_leakage, mode_norms, project_modes, reconstruct

__all__ = [
    'Rect2DGrid', 'Wavefunction2D',
    'Eigenpairs2D', 'Operator2D', 'assemble_2d', 'eigs_2d',
    'Evolution2D', 'evolve_cn', 'time_reversal_defect',
    'mode_leakage', 'mode_norms', 'project_modes', 'reconstruct',
]
