"""
横向约束模型

冻结纵向坐标 x 后的横向势 v_int(x, y) 以及它的二阶有限差分离散。
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.interpolate import RectBivariateSpline
from scipy.optimize import brentq

from ..exceptions import TransverseError
from ..utils import UniformGrid

Profile = Union[float, Callable[[np.ndarray], np.ndarray]]


def as_profile(value: Profile) -> Callable[[np.ndarray], np.ndarray]:
    """常数或函数统一为向量化的 x 剖面"""
    if callable(value):
        return lambda x: np.asarray(value(x), dtype=float) + 0.0 * np.asarray(x, dtype=float)
    constant = float(value)
    return lambda x: np.full(np.shape(x), constant)


class ConfinementModel(ABC):
    """横向约束模型基类"""

    @abstractmethod
    def potential(self, x: float, y: np.ndarray) -> np.ndarray:
        """冻结 x 处的横向势"""

    def active_mask(self, x: float, y: np.ndarray) -> np.ndarray:
        """参与求解的内部节点（两端为齐次Dirichlet）"""
        mask = np.zeros(len(y), dtype=bool)
        mask[1:-1] = True
        return mask

    def center(self, x: float) -> float:
        return 0.0

    def validate_on(self, x_grid: UniformGrid):
        """检查剖面在x网格上严格为正"""


@dataclass(frozen=True)
class RigidWall(ConfinementModel):
    """刚性壁 Y1(x) < y < Y2(x)，壁内势为零"""

    lower: Profile = 0.0
    upper: Profile = 1.0

    def potential(self, x, y):
        return np.zeros(len(y))

    def walls(self, x) -> Tuple[np.ndarray, np.ndarray]:
        return as_profile(self.lower)(x), as_profile(self.upper)(x)

    def active_mask(self, x, y):
        y1, y2 = self.walls(float(x))
        tol = 1e-12 * max(1.0, abs(float(y1)), abs(float(y2)))
        return (y > y1 + tol) & (y < y2 - tol)

    def center(self, x):
        y1, y2 = self.walls(float(x))
        return 0.5 * float(y1 + y2)

    def validate_on(self, x_grid):
        y1, y2 = self.walls(x_grid.points)
        if np.any(y2 - y1 <= 0):
            raise TransverseError("刚性壁宽度 Y2(x) − Y1(x) 必须处处为正", "INVALID_MODEL")


@dataclass(frozen=True)
class PowerWell(ConfinementModel):
    """软壁幂次势 amplitude·((y − center)/D(x))^{2m}"""

    dilation: Profile = 1.0
    m: float = 1.0
    amplitude: float = 1.0
    offset: float = 0.0

    def potential(self, x, y):
        d = float(as_profile(self.dilation)(x))
        return self.amplitude * np.abs((y - self.offset) / d) ** (2 * self.m)

    def center(self, x):
        return self.offset

    def validate_on(self, x_grid):
        if self.m <= 0 or self.amplitude <= 0:
            raise TransverseError("幂次 m 与幅值必须为正", "INVALID_MODEL")
        if np.any(as_profile(self.dilation)(x_grid.points) <= 0):
            raise TransverseError("伸缩剖面 D(x) 必须处处为正", "INVALID_MODEL")


@dataclass(frozen=True)
class Harmonic(ConfinementModel):
    """谐振子约束 ω(x)²(y − center)²/2"""

    omega: Profile = 1.0
    offset: float = 0.0

    def potential(self, x, y):
        w = float(as_profile(self.omega)(x))
        return 0.5 * w * w * (y - self.offset) ** 2

    def center(self, x):
        return self.offset

    def validate_on(self, x_grid):
        if np.any(as_profile(self.omega)(x_grid.points) <= 0):
            raise TransverseError("频率剖面 ω(x) 必须处处为正", "INVALID_MODEL")


@dataclass(frozen=True, eq=False)
class Tabulated(ConfinementModel):
    """表格化横向势，双三次样条插值"""

    x_nodes: np.ndarray
    y_nodes: np.ndarray
    values: np.ndarray
    _spline: RectBivariateSpline = field(init=False, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise TransverseError("表格势含有非有限值", "NONFINITE_POTENTIAL")
        spline = RectBivariateSpline(np.asarray(self.x_nodes, float), np.asarray(self.y_nodes, float), values)
        object.__setattr__(self, "_spline", spline)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray, np.ndarray], np.ndarray],
                      x_nodes: np.ndarray, y_nodes: np.ndarray) -> 'Tabulated':
        xx, yy = np.meshgrid(x_nodes, y_nodes, indexing="ij")
        return cls(np.asarray(x_nodes), np.asarray(y_nodes), func(xx, yy))

    def potential(self, x, y):
        return self._spline(float(x), np.asarray(y, float))[0]

    def center(self, x):
        samples = self.potential(x, self.y_nodes)
        return float(self.y_nodes[int(np.argmin(samples))])


@dataclass(frozen=True, eq=False)
class TransverseOperator:
    """−½∂²_y + v_int(x, ·) 在活动节点上的对称三对角离散"""

    mask: np.ndarray
    diag: np.ndarray
    off: np.ndarray

    @property
    def n_active(self) -> int:
        return int(self.mask.sum())

    def bands(self) -> np.ndarray:
        """全y网格上的带状存储 (3, ny)，非活动节点行列为零"""
        ny = len(self.mask)
        idx = np.flatnonzero(self.mask)
        out = np.zeros((3, ny))
        out[1, idx] = self.diag
        out[0, idx[1:]] = self.off
        out[2, idx[:-1]] = self.off
        return out

    def dense(self) -> np.ndarray:
        """活动节点上的稠密矩阵"""
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


def transverse_operator(model: ConfinementModel, x: float, y_grid: UniformGrid) -> TransverseOperator:
    """构造冻结 x 处的横向算子

    Args:
        model: 约束模型
        x: 纵向坐标
        y_grid: 横向网格（端点为Dirichlet边界）
    """
    y = y_grid.points
    mask = model.active_mask(x, y)
    idx = np.flatnonzero(mask)
    if len(idx) < 2:
        raise TransverseError(f"x = {x} 处活动节点少于2个", "GRID_TOO_SMALL")
    if not np.all(np.diff(idx) == 1):
        raise TransverseError(f"x = {x} 处活动区不连通", "DISCONNECTED_SECTION")
    v = np.asarray(model.potential(x, y), dtype=float)[idx]
    if not np.all(np.isfinite(v)):
        raise TransverseError(f"x = {x} 处横向势含有非有限值", "NONFINITE_POTENTIAL")
    inv = 1.0 / y_grid.step ** 2
    return TransverseOperator(mask=mask, diag=inv + v, off=np.full(len(idx) - 1, -0.5 * inv))


def _wkb_level(y: np.ndarray, v: np.ndarray, K: int):
    """势阱中第K个能级的Bohr–Sommerfeld估计；阱不够深时返回None"""
    top = min(v[0], v[-1])

    def action(energy):
        return trapezoid(np.sqrt(2.0 * np.clip(energy - v, 0.0, None)), y) / np.pi - (K - 0.5)

    if top <= v.min() or action(top) < 0:
        return None
    return brentq(action, v.min(), top, xtol=1e-12)


def suggest_y_window(model: ConfinementModel, x_grid: UniformGrid, K: int,
                     decay: float = 1e-12, factor: float = 1.5, n_samples: int = 17) -> Tuple[float, float]:
    """软壁模型的横向截断窗口

    取第K个能级的WKB转折点 ×factor，并向外延伸到WKB衰减达到 decay 为止。
    """
    if isinstance(model, RigidWall):
        y1, y2 = model.walls(x_grid.points)
        return float(np.min(y1)), float(np.max(y2))

    target = np.log(1.0 / decay)
    lo, hi = np.inf, -np.inf
    for x in x_grid.points[np.unique(np.linspace(0, x_grid.n - 1, min(n_samples, x_grid.n)).astype(int))]:
        c = model.center(x)
        half = 1.0
        for _ in range(40):
            y = np.linspace(c - half, c + half, 4001)
            v = model.potential(x, y)
            energy = _wkb_level(y, v, K)
            if energy is not None:
                kappa = np.sqrt(2.0 * np.clip(v - energy, 0.0, None))
                right = cumulative_trapezoid(kappa[y >= c], y[y >= c], initial=0.0)
                left = cumulative_trapezoid(kappa[y <= c][::-1], -y[y <= c][::-1], initial=0.0)
                if right[-1] >= target and left[-1] >= target:
                    inside = y[v <= energy]
                    y_right = y[y >= c][np.argmax(right >= target)]
                    y_left = y[y <= c][::-1][np.argmax(left >= target)]
                    lo = min(lo, c - max(factor * (c - inside.min()), c - y_left))
                    hi = max(hi, c + max(factor * (inside.max() - c), y_right - c))
                    break
            half *= 2.0
        else:
            raise TransverseError(f"x = {x} 处无法确定横向截断窗口", "WINDOW_NOT_FOUND")
    return float(lo), float(hi)
