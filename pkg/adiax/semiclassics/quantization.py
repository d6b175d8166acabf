"""
Bohr–Sommerfeld量子化

(1/π)∫_{x₋}^{x₊} √(2(E − v(x))) dx = h(n + 1/2)，积分取在两个转向点之间。
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar

from ..exceptions import MultiWell, NoSolution
from ..log import create_logger_with_context

DEFAULT_SCAN = 2001
DEFAULT_QUADRATURE = 64
ROOT_XTOL = 1e-14

PotentialLike = Union[Callable[[np.ndarray], np.ndarray], Tuple[np.ndarray, np.ndarray]]


def as_potential(v_eff: PotentialLike) -> Callable[[np.ndarray], np.ndarray]:
    """可调用对象原样返回；(x_nodes, values) 用三次样条插值"""
    if callable(v_eff):
        return v_eff
    x_nodes, values = v_eff
    return CubicSpline(np.asarray(x_nodes, float), np.asarray(values, float))


def evaluate_potential(v: Callable, x: np.ndarray) -> np.ndarray:
    """在网格上求值；常数势广播为与 x 同形的数组"""
    return np.broadcast_to(np.asarray(v(x), dtype=float), np.shape(x))


@dataclass(frozen=True, eq=False)
class QuantizedLevels:
    """量子化能级

    Attributes:
        n: 量子数
        energies: E^n
        turning_points: (len(n), 2) 的转向点 (x₋, x₊)
        h: 半经典参数
    """

    n: np.ndarray
    energies: np.ndarray
    turning_points: np.ndarray
    h: float

    def __len__(self) -> int:
        return len(self.n)


class _Well:
    """扫描网格上的单势阱"""

    def __init__(self, v: Callable, x_range: Sequence[float], n_scan: int, n_quad: int):
        self.v = v
        self.x = np.linspace(float(x_range[0]), float(x_range[1]), n_scan)
        self.values = evaluate_potential(v, self.x)
        m = int(np.argmin(self.values))
        lo, hi = self.x[max(m - 1, 0)], self.x[min(m + 1, n_scan - 1)]
        refined = minimize_scalar(lambda z: float(v(z)), bounds=(lo, hi), method='bounded',
                                  options={'xatol': 1e-12})
        self.m = m
        self.bottom = min(float(refined.fun), float(self.values[m]))
        self.top = float(min(self.values[0], self.values[-1]))
        self.nodes, self.weights = np.polynomial.legendre.leggauss(n_quad)

    def sign_changes(self, E: float) -> int:
        s = np.sign(E - self.values)
        s = s[s != 0]
        return int(np.count_nonzero(s[1:] != s[:-1]))

    def turning_points(self, E: float) -> Tuple[float, float]:
        changes = self.sign_changes(E)
        if changes > 2:
            raise MultiWell(f"E = {E:.6g} 处 E − v_eff 变号 {changes} 次，检测到多势阱", sign_changes=changes)
        left = np.nonzero(self.values[:self.m] >= E)[0]
        right = np.nonzero(self.values[self.m + 1:] >= E)[0]
        if len(left) == 0 or len(right) == 0:
            raise NoSolution(f"E = {E:.6g} 高于截断势阱的边缘 {self.top:.6g}")
        k = int(left[-1])
        j = self.m + 1 + int(right[0])
        f = lambda z: float(self.v(z)) - E
        x_minus = brentq(f, self.x[k], self.x[k + 1], xtol=ROOT_XTOL)
        x_plus = brentq(f, self.x[j - 1], self.x[j], xtol=ROOT_XTOL)
        return x_minus, x_plus

    def action(self, E: float) -> float:
        if E <= self.bottom:
            return 0.0
        a, b = self.turning_points(E)
        center, half = 0.5 * (a + b), 0.5 * (b - a)
        theta = 0.5 * np.pi * self.nodes
        x = center + half * np.sin(theta)
        kinetic = np.clip(2.0 * (E - evaluate_potential(self.v, x)), 0.0, None)
        integrand = np.sqrt(kinetic) * half * np.cos(theta)
        return float(0.5 * np.sum(self.weights * integrand))


def bohr_sommerfeld_action(v_eff: PotentialLike, x_range: Sequence[float], E: float,
                           n_scan: int = DEFAULT_SCAN, n_quad: int = DEFAULT_QUADRATURE) -> float:
    """作用量 (1/π)∫√(2(E − v_eff))dx"""
    return _Well(as_potential(v_eff), x_range, n_scan, n_quad).action(E)


def bohr_sommerfeld(v_eff: PotentialLike, x_range: Sequence[float], h: float,
                    n: Optional[Union[int, Sequence[int]]] = None,
                    window: Optional[Tuple[float, float]] = None,
                    n_scan: int = DEFAULT_SCAN, n_quad: int = DEFAULT_QUADRATURE) -> QuantizedLevels:
    """求解 Bohr–Sommerfeld 量子化条件

    Args:
        v_eff: 有效势（向量化可调用对象，或 (x_nodes, values)）
        x_range: 搜索区间，势阱须在其内
        h: 半经典参数
        n: 量子数（整数或序列）；与 window 二选一
        window: 能量窗口 (E_lo, E_hi)
        n_scan: 转向点扫描网格的节点数
        n_quad: Gauss–Legendre 节点数

    Returns:
        QuantizedLevels
    """
    if (n is None) == (window is None):
        raise ValueError("n 与 window 必须且只能给出一个")
    if not h > 0:
        raise ValueError(f"h 必须为正，实际为 {h}")
    logger = create_logger_with_context({'component': 'semiclassics', 'operation': 'bohr_sommerfeld'})
    well = _Well(as_potential(v_eff), x_range, n_scan, n_quad)
    top_action = well.action(well.top)

    if window is not None:
        lo, hi = float(window[0]), min(float(window[1]), well.top)
        first = max(0, int(np.ceil(well.action(max(lo, well.bottom)) / h - 0.5)))
        last = int(np.floor(well.action(hi) / h - 0.5)) if hi > well.bottom else -1
        quantum_numbers = list(range(first, last + 1))
    else:
        quantum_numbers = [int(n)] if np.isscalar(n) else [int(k) for k in n]

    energies, points = [], []
    for k in quantum_numbers:
        if k < 0:
            raise ValueError(f"量子数必须非负，实际为 {k}")
        target = h * (k + 0.5)
        if target >= top_action:
            raise NoSolution(f"势阱过浅: h(n+1/2) = {target:.6g} ≥ 最大作用量 {top_action:.6g}", n=k)
        E = brentq(lambda e: well.action(e) - target, well.bottom, well.top, xtol=ROOT_XTOL, rtol=1e-15)
        energies.append(E)
        points.append(well.turning_points(E))
        logger.debug(f"n={k}: E = {E:.12g}, 转向点 = ({points[-1][0]:.6g}, {points[-1][1]:.6g})")

    logger.info(f"✅ Bohr–Sommerfeld 量子化完成: {len(energies)} 个能级 (h = {h})")
    return QuantizedLevels(n=np.array(quantum_numbers, dtype=int), energies=np.array(energies),
                           turning_points=np.array(points).reshape(-1, 2), h=float(h))
