"""
有效哈密顿量与几何势
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ..exceptions import ReductionError
from ..log import create_logger_with_context
from ..transverse import TermBranch
from ..utils import UniformGrid, finite_difference, ensure_finite

PotentialLike = Union[np.ndarray, Callable[[np.ndarray], np.ndarray], float]


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    """H_eff(p, x) = p²/2 + v_ext(x) + ε^ν(x)

    节点之间对 x 线性插值；dp、dx 在节点上给出。
    """

    x_grid: UniformGrid
    v_ext: np.ndarray
    eps: np.ndarray
    d_potential: np.ndarray
    nu: int = 1

    @property
    def potential(self) -> np.ndarray:
        return self.v_ext + self.eps

    def __call__(self, p, x):
        return 0.5 * np.asarray(p) ** 2 + np.interp(x, self.x_grid.points, self.potential)

    def at_node(self, p: float, i: int) -> float:
        return 0.5 * p * p + float(self.potential[i])

    def dp(self, p: float, i: int) -> float:
        return p

    def dx(self, p: float, i: int) -> float:
        return float(self.d_potential[i])


def sample_on_grid(values: PotentialLike, x_grid: UniformGrid, what: str = "v_ext") -> np.ndarray:
    """把常数、函数或数组统一为 x 网格上的采样"""
    if callable(values):
        samples = np.asarray(values(x_grid.points), dtype=float) + np.zeros(x_grid.n)
    elif np.ndim(values) == 0:
        samples = np.full(x_grid.n, float(values))
    else:
        samples = np.asarray(values, dtype=float)
    if samples.shape != (x_grid.n,):
        raise ReductionError(f"{what} 采样点数 {samples.shape} 与x网格 {x_grid.n} 不一致", "GRID_MISMATCH")
    return ensure_finite(samples, what, ReductionError)


def effective_hamiltonian(branch: TermBranch, v_ext: PotentialLike = 0.0) -> EffectiveHamiltonian:
    """第 ν 支的有效哈密顿量

    Args:
        branch: 横向能级支
        v_ext: 外势，x网格上的采样、函数或常数

    Returns:
        EffectiveHamiltonian
    """
    samples = sample_on_grid(v_ext, branch.x_grid)
    eps = np.asarray(branch.eps, dtype=float)
    d_potential = finite_difference(samples + eps, branch.x_grid.step)
    logger = create_logger_with_context({'component': 'reduction', 'nu': branch.nu})
    logger.debug(f"📊 有效势范围 [{(samples + eps).min():.6g}, {(samples + eps).max():.6g}]")
    return EffectiveHamiltonian(x_grid=branch.x_grid, v_ext=samples, eps=eps, d_potential=d_potential,
                                nu=branch.nu)


def geometric_potential(curvature: np.ndarray) -> np.ndarray:
    """G(x) = −k(x)²/8"""
    k = ensure_finite(np.asarray(curvature, dtype=float), "曲率", ReductionError)
    return -0.125 * k * k
