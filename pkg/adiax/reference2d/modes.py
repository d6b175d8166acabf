"""
横向模式投影

ψ_k(x_i) = ⟨w_k(x_i, ·), Ψ(x_i, ·)⟩_y，以及由模式系数重构二维波函数。
"""

from typing import List, Sequence

import numpy as np

from ..exceptions import ReferenceSolverError
from ..transverse import TermBranch
from ..utils import trapezoid_weights
from .grid import Wavefunction2D


def _check_grids(psi: Wavefunction2D, branches: Sequence[TermBranch]):
    if not branches:
        raise ReferenceSolverError("至少需要一个横向支", "NO_BRANCHES")
    for branch in branches:
        if not (branch.y_grid.matches(psi.grid.y_grid) and branch.x_grid.matches(psi.grid.x_grid)):
            raise ReferenceSolverError(f"第 {branch.nu} 支的网格与波函数网格不一致", "GRID_MISMATCH",
                                       nu=branch.nu)


def project_modes(psi: Wavefunction2D, branches: Sequence[TermBranch]) -> np.ndarray:
    """投影到横向模式

    Args:
        psi: 二维波函数
        branches: 与 psi 同网格的横向支

    Returns:
        复系数 (K, nx)
    """
    _check_grids(psi, branches)
    wy = trapezoid_weights(psi.grid.y_grid.n, psi.grid.y_grid.step)
    return np.stack([np.sum(wy * branch.w * psi.values, axis=1) for branch in branches])


def reconstruct(coefficients: np.ndarray, branches: Sequence[TermBranch]) -> np.ndarray:
    """Σ_k w_k(x, y)ψ_k(x)，形状 (nx, ny)"""
    return np.einsum('kx,kxy->xy', np.asarray(coefficients), np.stack([b.w for b in branches]))


def mode_norms(coefficients: np.ndarray, psi: Wavefunction2D) -> np.ndarray:
    """各模式系数的 ‖ψ_k‖²（x方向梯形求积）"""
    wx = trapezoid_weights(psi.grid.x_grid.n, psi.grid.x_grid.step)
    return np.sum(wx * np.abs(coefficients) ** 2, axis=1)


def mode_leakage(psi: Wavefunction2D, branches: List[TermBranch], nu: int = 1) -> float:
    """Σ_{k≠ν}‖ψ_k‖² / ‖Ψ‖²"""
    norms = mode_norms(project_modes(psi, branches), psi)
    others = sum(n for b, n in zip(branches, norms) if b.nu != nu)
    return float(others / psi.norm() ** 2)
