"""
横向能级支（term）的求解与追踪

对每个 x 节点求解冻结的横向本征问题，按本征向量重叠在相邻节点间匹配，
并固定相位使相邻重叠为正。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ..exceptions import DegenerateTerm, OverlapAmbiguity, TransverseError
from ..log import create_logger_with_context
from ..utils import UniformGrid, finite_difference, trapezoid_weights
from .confinement import ConfinementModel, transverse_operator

AMBIGUITY_MARGIN = 0.1


@dataclass(frozen=True, eq=False)
class TransverseSolution:
    """单个 x 处的最低若干本征对"""

    x: float
    eps: np.ndarray
    w: np.ndarray  # (K, ny)，非活动节点为零


@dataclass(frozen=True, eq=False)
class TermBranch:
    """沿 x 平滑追踪的第 ν 支横向能级与本征函数"""

    nu: int
    eps: np.ndarray       # (nx,)
    w: np.ndarray         # (nx, ny)，实值
    x_grid: UniformGrid
    y_grid: UniformGrid
    gap_below: float
    gap_above: float

    @property
    def weights(self) -> np.ndarray:
        return trapezoid_weights(self.y_grid.n, self.y_grid.step)

    def inner(self, i: int, field: np.ndarray) -> complex:
        """⟨w(x_i), field⟩_y"""
        return complex(np.sum(self.weights * self.w[i] * field))


@dataclass(frozen=True, eq=False)
class BranchDerivatives:
    """支的 x 导数

    Attributes:
        d_eps: ∂x ε
        d_w: ∂x w（已投影到 w 的正交补）
        overlap: 返回的 ⟨w, ∂x w⟩
        raw_overlap: 投影前差分的 ⟨w, D w⟩
    """

    d_eps: np.ndarray
    d_w: np.ndarray
    overlap: np.ndarray
    raw_overlap: np.ndarray


def solve_transverse_at_x(model: ConfinementModel, x: float, y_grid: UniformGrid, K: int) -> TransverseSolution:
    """求冻结 x 处横向问题的最低 K 个本征对

    Args:
        model: 约束模型
        x: 纵向坐标
        y_grid: 横向网格，两端为齐次Dirichlet边界
        K: 本征对个数

    Returns:
        升序本征值与梯形求积归一、首个非零分量为正的本征向量
    """
    if K < 1:
        raise TransverseError("K 必须 ≥ 1", "INVALID_K")
    op = transverse_operator(model, x, y_grid)
    if K > op.n_active:
        raise TransverseError(f"K = {K} 超过活动节点数 {op.n_active}", "K_EXCEEDS_GRID", K=K, n=op.n_active)

    eps, vecs = eigh_tridiagonal(op.diag, op.off, select='i', select_range=(0, K - 1))
    w = np.zeros((K, y_grid.n))
    w[:, op.mask] = vecs.T

    weights = trapezoid_weights(y_grid.n, y_grid.step)
    w /= np.sqrt(np.sum(weights * w * w, axis=1))[:, None]
    for row in w:
        lead = np.flatnonzero(np.abs(row) > 1e-8 * np.abs(row).max())[0]
        if row[lead] < 0:
            row *= -1.0
    return TransverseSolution(x=float(x), eps=eps, w=w)


def track_branches(model: ConfinementModel, x_grid: UniformGrid, y_grid: UniformGrid, K: int,
                   gap_tol: float = 1e-6, max_workers: int = 1) -> List[TermBranch]:
    """沿 x 网格追踪最低 K 支横向能级

    Args:
        model: 约束模型
        x_grid: 纵向网格
        y_grid: 横向网格
        K: 支数
        gap_tol: 相邻能级最小间隙
        max_workers: 各 x 节点本征求解的并行线程数

    Returns:
        K 个 TermBranch（ν = 1..K）
    """
    logger = create_logger_with_context({'component': 'transverse', 'K': K})
    model.validate_on(x_grid)
    xs = x_grid.points

    n_active = min(transverse_operator(model, x, y_grid).n_active for x in xs)
    levels = min(K + 1, n_active)

    def solve(x):
        return solve_transverse_at_x(model, x, y_grid, levels)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            solutions = list(pool.map(solve, xs))
    else:
        solutions = [solve(x) for x in xs]

    for sol in solutions:
        gaps = np.diff(sol.eps[:levels])
        if gaps.size and gaps.min() < gap_tol:
            level = int(np.argmin(gaps)) + 1
            raise DegenerateTerm(
                f"x = {sol.x:.6g} 处第 {level} 与第 {level + 1} 能级间隙 {gaps.min():.3e} 低于阈值 {gap_tol:.1e}",
                x=sol.x, level=level, gap=float(gaps.min()))

    weights = trapezoid_weights(y_grid.n, y_grid.step)
    eps = np.empty((x_grid.n, levels))
    w = np.empty((x_grid.n, levels, y_grid.n))
    eps[0], w[0] = solutions[0].eps, solutions[0].w

    for i in range(1, x_grid.n):
        sol = solutions[i]
        overlaps = (w[i - 1] * weights) @ sol.w.T
        order = _match(np.abs(overlaps), sol.x)
        eps[i] = sol.eps[order]
        w[i] = sol.w[order]
        signs = np.sign(np.sum(weights * w[i - 1] * w[i], axis=1))
        signs[signs == 0] = 1.0
        w[i] *= signs[:, None]

    all_gaps = np.diff(eps, axis=1)
    branches = []
    for k in range(K):
        below = float(all_gaps[:, k - 1].min()) if k > 0 else np.inf
        above = float(all_gaps[:, k].min()) if k < levels - 1 else np.inf
        branches.append(TermBranch(nu=k + 1, eps=eps[:, k].copy(), w=w[:, k].copy(), x_grid=x_grid,
                                   y_grid=y_grid, gap_below=below, gap_above=above))
    logger.info(f"✅ 追踪完成: {K} 支, 最小间隙 {all_gaps.min() if all_gaps.size else np.inf:.4e}")
    return branches


def _match(abs_overlaps: np.ndarray, x: float) -> np.ndarray:
    """按最大重叠匹配，候选差距不足 AMBIGUITY_MARGIN 时报错"""
    n = abs_overlaps.shape[0]
    order = np.empty(n, dtype=int)
    for k in range(n):
        ranked = np.argsort(abs_overlaps[k])[::-1]
        if len(ranked) > 1 and abs_overlaps[k, ranked[0]] - abs_overlaps[k, ranked[1]] < AMBIGUITY_MARGIN:
            raise OverlapAmbiguity(f"x = {x:.6g} 处第 {k + 1} 支的匹配不唯一", x=x,
                                   overlaps=abs_overlaps[k].tolist())
        order[k] = ranked[0]
    if len(set(order.tolist())) != n:
        raise OverlapAmbiguity(f"x = {x:.6g} 处多支匹配到同一能级", x=x, overlaps=abs_overlaps.tolist())
    return order


def branch_x_derivatives(branch: TermBranch) -> BranchDerivatives:
    """支的 x 导数：八阶中心差分，端点同阶单侧

    实归一化支的精确导数与 w 正交，返回的 ∂x w 已去掉沿 w 的分量。
    """
    if branch.x_grid.n < 3:
        raise TransverseError("求 x 导数至少需要3个节点", "GRID_TOO_SMALL")
    dx = branch.x_grid.step
    weights = branch.weights
    d_eps = finite_difference(branch.eps, dx)
    raw = finite_difference(branch.w, dx, axis=0)
    raw_overlap = np.sum(weights * branch.w * raw, axis=1)
    d_w = raw - raw_overlap[:, None] * branch.w
    overlap = np.sum(weights * branch.w * d_w, axis=1)

    logger = create_logger_with_context({'component': 'transverse', 'nu': branch.nu})
    logger.debug(f"📊 差分重叠 max|⟨w, Dw⟩| = {np.abs(raw_overlap).max():.3e}")
    return BranchDerivatives(d_eps=d_eps, d_w=d_w, overlap=overlap, raw_overlap=raw_overlap)


def branch_orthonormality(branches: List[TermBranch]) -> float:
    """max_i max_{ν,ν'} |⟨w^ν, w^ν'⟩ − δ|"""
    weights = branches[0].weights
    stack = np.stack([b.w for b in branches], axis=1)  # (nx, K, ny)
    gram = np.einsum('ikn,iln->ikl', stack * weights, stack)
    return float(np.abs(gram - np.eye(len(branches))[None]).max())


def sample_potential(model: ConfinementModel, x_grid: UniformGrid, y_grid: UniformGrid) -> np.ndarray:
    """在 (x, y) 网格上采样横向势，形状 (nx, ny)"""
    return np.stack([np.asarray(model.potential(x, y_grid.points), float) for x in x_grid.points])


def solve_window(model: ConfinementModel, x_values: Tuple[float, ...], y_grid: UniformGrid,
                 K: int) -> np.ndarray:
    """若干 x 处最低 K 个横向能级，形状 (len(x_values), K)"""
    return np.stack([solve_transverse_at_x(model, x, y_grid, K).eps for x in x_values])
