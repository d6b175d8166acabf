"""
约化一维定态问题的有限差分求解
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eig_banded, eigh_tridiagonal

from ..exceptions import NonHermitianOperator, ReductionError
from ..log import create_logger_with_context, log_execution_time
from ..utils import trapezoid_weights
from .regimes import EssentialHamiltonian

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ReducedSpectrum:
    """约化问题的本征对

    Attributes:
        eigenvalues: 重标能量，升序
        vectors: 形状 (m, nx)，两端为零，梯形求积归一
        physical: 换算回原能量尺度的本征值
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    physical: np.ndarray
    x: np.ndarray


def reduced_operator_bands(essential: EssentialHamiltonian) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """内部节点上的三对角离散

    Returns:
        (diag, upper, lower)：upper[i] = A[i, i+1]，lower[i] = A[i+1, i]
    """
    n = essential.x_grid.n
    if n < 3:
        raise ReductionError("x 网格至少需要3个节点", "GRID_TOO_SMALL")
    dx = essential.x_grid.step
    h = essential.h
    inner = slice(1, n - 1)

    kin = essential.kinetic * h * h / (dx * dx)
    diag = 2.0 * kin + np.asarray(essential.potential, dtype=complex)[inner]
    c1 = np.asarray(essential.c1, dtype=complex)[inner]
    # c₁(x_i)·(−ih)(ψ_{i+1} − ψ_{i−1})/(2Δx)
    drift = -1j * h / (2.0 * dx) * c1
    upper = -kin + drift[:-1]
    lower = -kin - drift[1:]
    return diag, upper, lower


def hermiticity_defect(diag: np.ndarray, upper: np.ndarray, lower: np.ndarray) -> float:
    scale = max(1.0, float(np.abs(diag).max()))
    defect = max(float(np.abs(upper - np.conj(lower)).max(initial=0.0)), float(np.abs(diag.imag).max()))
    return defect / scale


@log_execution_time()
def solve_reduced_stationary(essential: EssentialHamiltonian, count: Optional[int] = None,
                             window: Optional[Tuple[float, float]] = None,
                             tol: float = HERMITIAN_TOL) -> ReducedSpectrum:
    """求解 −kinetic·h²ψ″ + c₁(−ihψ′) + vψ = Eψ，两端齐次Dirichlet

    Args:
        essential: 本质哈密顿量
        count: 最低本征值个数
        window: 能量窗口 (a, b]，与 count 二选一
        tol: 厄米性容差（相对）

    Returns:
        ReducedSpectrum
    """
    if (count is None) == (window is None):
        raise ReductionError("count 与 window 必须且只能给定一个", "INVALID_REQUEST")
    logger = create_logger_with_context({'component': 'reduction', 'operation': 'stationary'})
    diag, upper, lower = reduced_operator_bands(essential)
    defect = hermiticity_defect(diag, upper, lower)
    if defect > tol:
        raise NonHermitianOperator(f"约化算子非厄米，缺陷 {defect:.3e}", defect=defect)

    n = len(diag)
    if count is not None:
        if not 1 <= count <= n:
            raise ReductionError(f"count = {count} 超出内部节点数 {n}", "INVALID_REQUEST")
        select, select_range = 'i', (0, count - 1)
    else:
        select, select_range = 'v', (float(window[0]), float(window[1]))

    try:
        if np.abs(upper.imag).max(initial=0.0) <= tol * max(1.0, float(np.abs(diag).max())):
            values, vecs = eigh_tridiagonal(diag.real, upper.real, select=select, select_range=select_range)
        else:
            band = np.zeros((2, n), dtype=complex)
            band[0, 1:] = upper
            band[1] = diag.real
            values, vecs = eig_banded(band, lower=False, select=select, select_range=select_range)
    except LinAlgError as e:
        raise ReductionError(f"约化本征问题求解失败: {e}", "EIGENSOLVER_FAILED") from e

    grid = essential.x_grid
    vectors = np.zeros((len(values), grid.n), dtype=vecs.dtype)
    vectors[:, 1:-1] = vecs.T
    norms = np.sqrt(np.sum(trapezoid_weights(grid.n, grid.step) * np.abs(vectors) ** 2, axis=1))
    vectors /= norms[:, None]
    logger.info(f"✅ 约化定态求解完成: {len(values)} 个本征值" +
                (f", 最低 {values[0]:.10g}" if len(values) else ""))
    return ReducedSpectrum(eigenvalues=values, vectors=vectors, physical=essential.to_physical(values),
                           x=grid.points)
