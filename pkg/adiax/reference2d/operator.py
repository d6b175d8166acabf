"""
二维参考算子与特征求解

Ĥ = −(μ²/2)∂²_x − (1/2)∂²_y + v(x, y)，四边齐次Dirichlet，五点差分，
内部节点按 x 主序编号。
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from ..exceptions import ReferenceSolverError
from ..log import create_logger_with_context, log_execution_time
from .grid import Rect2DGrid, Wavefunction2D

RESIDUAL_TOL = 1e-8
DENSE_LIMIT = 600


@dataclass(frozen=True, eq=False)
class Operator2D:
    """内部节点上的稀疏对称算子

    Attributes:
        matrix: CSR矩阵，维数 (nx−2)(ny−2)
        grid: 网格
        mu: 绝热参数
        potential: 全网格上的势 (nx, ny)
    """

    matrix: sp.csr_matrix
    grid: Rect2DGrid
    mu: float
    potential: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, psi: Wavefunction2D) -> Wavefunction2D:
        vector = self.matrix @ self.grid.to_interior(psi.values)
        return Wavefunction2D(self.grid, self.grid.from_interior(vector))

    def symmetry_defect(self) -> float:
        diff = self.matrix - self.matrix.T
        return float(np.abs(diff.data).max()) if diff.nnz else 0.0


def _second_difference(n: int, step: float) -> sp.csr_matrix:
    """n 个内部节点上的 ∂² 差分（Dirichlet消去）"""
    return sp.diags([np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)], [-1, 0, 1], format='csr') / step ** 2


def assemble_2d(mu: float, potential: Union[np.ndarray, Callable], grid: Rect2DGrid) -> Operator2D:
    """组装二维五点差分算子

    Args:
        mu: 绝热参数（> 0）
        potential: 全网格上的势 (nx, ny)，或向量化函数 v(X, Y)
        grid: 网格

    Returns:
        Operator2D
    """
    if not mu > 0:
        raise ReferenceSolverError(f"μ 必须为正，实际为 {mu}", "INVALID_MU")
    v = grid.sample(potential) if callable(potential) else np.asarray(potential, dtype=float)
    if v.shape != grid.shape:
        raise ReferenceSolverError(f"势的形状 {v.shape} 与网格 {grid.shape} 不一致", "GRID_MISMATCH")
    interior = grid.to_interior(v)
    if not np.all(np.isfinite(interior)):
        raise ReferenceSolverError("势在内部节点含有非有限值", "NONFINITE_POTENTIAL")

    mx, my = grid.interior_shape
    t_x = -0.5 * mu * mu * _second_difference(mx, grid.x_grid.step)
    t_y = -0.5 * _second_difference(my, grid.y_grid.step)
    matrix = sp.kron(t_x, sp.identity(my), format='csr') + sp.kron(sp.identity(mx), t_y, format='csr')
    matrix = (matrix + sp.diags(interior)).tocsr()

    logger = create_logger_with_context({'component': 'reference2d'})
    logger.debug(f"📊 二维算子: {grid.shape[0]}×{grid.shape[1]} 网格, 维数 {matrix.shape[0]}, nnz {matrix.nnz}")
    return Operator2D(matrix=matrix, grid=grid, mu=float(mu), potential=v)


@dataclass(frozen=True, eq=False)
class Eigenpairs2D:
    energies: np.ndarray
    states: List[Wavefunction2D]
    residuals: np.ndarray


@log_execution_time()
def eigs_2d(op: Operator2D, k: int, sigma: Optional[float] = None,
            window: Optional[Tuple[float, float]] = None, tol: float = 1e-12,
            residual_tol: float = RESIDUAL_TOL) -> Eigenpairs2D:
    """求二维算子的 k 个本征对

    默认取最低的 k 个；给出 sigma 时取最靠近 sigma 的 k 个（移位求逆），
    给出 window 时取窗口中心附近并只保留落在窗口内的本征值。

    Args:
        op: 二维算子
        k: 本征对个数（须远小于维数）
        sigma: 移位
        window: 能量窗口 (E_lo, E_hi)
        tol: Lanczos 收敛容差
        residual_tol: ‖AΨ − EΨ‖ / ‖Ψ‖ 的上限

    Returns:
        Eigenpairs2D，能量升序，本征函数按二维梯形求积归一
    """
    logger = create_logger_with_context({'component': 'reference2d', 'operation': 'eigs'})
    if k < 1 or k >= op.dim:
        raise ReferenceSolverError(f"k = {k} 超出范围 [1, {op.dim})", "INVALID_K")
    if window is not None:
        sigma = 0.5 * (window[0] + window[1])
    if sigma is None:
        sigma = float(op.grid.to_interior(op.potential).min()) - 1e-3

    if op.dim <= DENSE_LIMIT:
        energies, vectors = eigh(op.matrix.toarray())
        order = np.argsort(np.abs(energies - sigma))[:k]
        energies, vectors = energies[order], vectors[:, order]
    else:
        try:
            energies, vectors = eigsh(op.matrix.tocsc(), k=k, sigma=sigma, which='LM', tol=tol)
        except ArpackNoConvergence as exc:
            raise ReferenceSolverError(f"Lanczos迭代未收敛: {exc}", "NO_CONVERGENCE") from exc

    order = np.argsort(energies)
    energies, vectors = energies[order], vectors[:, order]
    if window is not None:
        keep = (energies >= window[0]) & (energies <= window[1])
        energies, vectors = energies[keep], vectors[:, keep]

    residuals = np.linalg.norm(op.matrix @ vectors - vectors * energies, axis=0) / np.linalg.norm(vectors, axis=0)
    if residuals.size and residuals.max() > residual_tol:
        raise ReferenceSolverError(f"本征残差 {residuals.max():.3e} 超过 {residual_tol:.0e}", "NO_CONVERGENCE",
                                   residual=float(residuals.max()))

    cell = op.grid.x_grid.step * op.grid.y_grid.step
    states = []
    for j in range(vectors.shape[1]):
        vec = vectors[:, j] / np.sqrt(cell * np.sum(np.abs(vectors[:, j]) ** 2))
        lead = int(np.argmax(np.abs(vec)))
        vec = vec * np.sign(vec[lead])
        states.append(Wavefunction2D(op.grid, op.grid.from_interior(vec)))
    logger.info(f"✅ 二维本征求解完成: {len(energies)} 个本征值, 最大残差 {residuals.max() if residuals.size else 0:.2e}")
    return Eigenpairs2D(energies=energies, states=states, residuals=residuals)
