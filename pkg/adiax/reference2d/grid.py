"""
二维矩形网格与波函数
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from ..exceptions import ReferenceSolverError
from ..utils import UniformGrid, trapezoid_weights

MIN_NODES = 16


@dataclass(frozen=True)
class Rect2DGrid:
    """矩形 [x₀, x₁] × [y₀, y₁] 上的张量积网格，边界节点为Dirichlet"""

    x_grid: UniformGrid
    y_grid: UniformGrid

    def __post_init__(self):
        for name, grid in (('x', self.x_grid), ('y', self.y_grid)):
            if grid.n < MIN_NODES:
                raise ReferenceSolverError(f"{name} 方向节点数 {grid.n} < {MIN_NODES}", "GRID_TOO_SMALL")

    @classmethod
    def from_bounds(cls, x_range: Tuple[float, float], nx: int, y_range: Tuple[float, float],
                    ny: int) -> 'Rect2DGrid':
        return cls(UniformGrid(float(x_range[0]), float(x_range[1]), int(nx)),
                   UniformGrid(float(y_range[0]), float(y_range[1]), int(ny)))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.x_grid.n, self.y_grid.n

    @property
    def interior_shape(self) -> Tuple[int, int]:
        return self.x_grid.n - 2, self.y_grid.n - 2

    @cached_property
    def weights(self) -> np.ndarray:
        """二维梯形求积权重 (nx, ny)"""
        wx = trapezoid_weights(self.x_grid.n, self.x_grid.step)
        wy = trapezoid_weights(self.y_grid.n, self.y_grid.step)
        return np.outer(wx, wy)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x_grid.points, self.y_grid.points, indexing='ij')

    def sample(self, func) -> np.ndarray:
        """在全网格上求值 func(x, y)，形状 (nx, ny)"""
        X, Y = self.mesh()
        return np.broadcast_to(np.asarray(func(X, Y), dtype=float), self.shape).copy()

    def to_interior(self, values: np.ndarray) -> np.ndarray:
        """内部节点按 x 主序展平"""
        return np.asarray(values)[1:-1, 1:-1].reshape(-1)

    def from_interior(self, vector: np.ndarray) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.result_type(vector, float))
        out[1:-1, 1:-1] = np.asarray(vector).reshape(self.interior_shape)
        return out


@dataclass(frozen=True, eq=False)
class Wavefunction2D:
    """网格上的复波函数"""

    grid: Rect2DGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            raise ReferenceSolverError(f"波函数形状 {values.shape} 与网格 {self.grid.shape} 不一致",
                                       "GRID_MISMATCH")
        if not np.all(np.isfinite(values)):
            raise ReferenceSolverError("波函数含有非有限值", "NONFINITE_STATE")
        object.__setattr__(self, 'values', values)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.grid.weights * np.abs(self.values) ** 2)))

    def normalized(self) -> 'Wavefunction2D':
        norm = self.norm()
        if not norm > 0:
            raise ReferenceSolverError("零波函数无法归一化", "ZERO_NORM")
        return Wavefunction2D(self.grid, self.values / norm)

    def inner(self, other: 'Wavefunction2D') -> complex:
        """⟨self, other⟩"""
        return complex(np.sum(self.grid.weights * np.conj(self.values) * other.values))

    def x_density(self) -> np.ndarray:
        """∫|Ψ|²dy，形状 (nx,)"""
        wy = trapezoid_weights(self.grid.y_grid.n, self.grid.y_grid.step)
        return np.sum(wy * np.abs(self.values) ** 2, axis=1)

    def centroid_x(self) -> float:
        density = self.x_density()
        wx = trapezoid_weights(self.grid.x_grid.n, self.grid.x_grid.step)
        return float(np.sum(wx * self.grid.x_grid.points * density) / np.sum(wx * density))

    @classmethod
    def from_function(cls, grid: Rect2DGrid, func) -> 'Wavefunction2D':
        X, Y = grid.mesh()
        values = np.broadcast_to(np.asarray(func(X, Y), dtype=complex), grid.shape).copy()
        values[0, :] = values[-1, :] = 0.0
        values[:, 0] = values[:, -1] = 0.0
        return cls(grid, values)
