"""
一维散射渐近

E 高于势垒时波列通过，渐近动量 p_± = √(2(E − v_∓))；
E 低于势垒时在最左转向点 x_f 反射，反射波带相位因子 e^{−iπ/2}。
左右通道都计入横向能量偏移；任一侧通道关闭时抛出 ScatteringError。
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq, minimize_scalar

from ..exceptions import ScatteringError
from ..log import create_logger_with_context
from .quantization import PotentialLike, as_potential, evaluate_potential

DEFAULT_SCAN = 4001
TOP_TOL = 1e-12
REFLECTION_PHASE = np.exp(-0.5j * np.pi)


class ScatteringOutcome(str, Enum):
    TRANSMITTED = "Transmitted"
    REFLECTED = "Reflected"


@dataclass(frozen=True, eq=False)
class ScatteringAsymptotics:
    """单个能量的散射结果

    Attributes:
        energy: 能量 E
        h: 半经典参数
        outcome: Transmitted 或 Reflected
        p_minus, p_plus: 左右渐近动量（仅 Transmitted）
        x_f: 转向点（仅 Reflected）
        reflection_phase: 反射波相位因子 e^{−iπ/2}（仅 Reflected）
        v_max: 轴上有效势最大值
    """

    energy: float
    h: float
    outcome: ScatteringOutcome
    v_eff: Callable[[np.ndarray], np.ndarray]
    x_range: Tuple[float, float]
    v_max: float
    p_minus: Optional[float] = None
    p_plus: Optional[float] = None
    x_f: Optional[float] = None
    reflection_phase: Optional[complex] = None

    @property
    def transmitted(self) -> bool:
        return self.outcome is ScatteringOutcome.TRANSMITTED

    def as_row(self) -> dict:
        return {
            'E': self.energy,
            'outcome': self.outcome.value,
            'p_minus': self.p_minus if self.p_minus is not None else float('nan'),
            'p_plus': self.p_plus if self.p_plus is not None else float('nan'),
            'x_f': self.x_f if self.x_f is not None else float('nan'),
        }

    def wave(self, x_query: Sequence[float], n_fine: int = 4001) -> np.ndarray:
        """首阶WKB波

        Transmitted: √(p_−/p)·e^{(i/h)∫p}；Reflected: 入射波 + e^{−iπ/2}·反射波，x_f 右侧为 0。
        相位参考点为区间左端（Transmitted）或 x_f（Reflected）。
        """
        x_query = np.asarray(x_query, dtype=float)
        right = self.x_range[1] if self.transmitted else self.x_f
        fine = np.linspace(self.x_range[0], right, n_fine)
        momentum = np.sqrt(np.clip(2.0 * (self.energy - evaluate_potential(self.v_eff, fine)), 0.0, None))
        phase = cumulative_trapezoid(momentum, fine, initial=0.0)
        p_left = momentum[0]

        inside = x_query <= right
        p = np.interp(x_query[inside], fine, momentum)
        action = np.interp(x_query[inside], fine, phase)
        psi = np.zeros(len(x_query), dtype=complex)
        with np.errstate(divide='ignore', invalid='ignore'):
            amplitude = np.sqrt(p_left / p)
        if self.transmitted:
            psi[inside] = amplitude * np.exp(1j * action / self.h)
        else:
            relative = action - phase[-1]
            psi[inside] = amplitude * (np.exp(1j * relative / self.h)
                                       + self.reflection_phase * np.exp(-1j * relative / self.h))
        return psi


def scatter_1d(v_eff: PotentialLike, x_range: Sequence[float], E: float, h: float,
               v_minus: Optional[float] = None, v_plus: Optional[float] = None,
               offsets: Tuple[float, float] = (0.0, 0.0), n_scan: int = DEFAULT_SCAN) -> ScatteringAsymptotics:
    """能量 E 的入射波从左侧到达势垒

    Args:
        v_eff: 有效势，区间外为常数
        x_range: 包含势垒的区间
        E: 能量
        h: 半经典参数
        v_minus, v_plus: 左右尾部势值；缺省时取区间端点的值
        offsets: 左右通道的横向能量偏移（ε_⊥ 的差）
        n_scan: 扫描网格节点数

    Returns:
        ScatteringAsymptotics
    """
    logger = create_logger_with_context({'component': 'semiclassics', 'operation': 'scatter'})
    v = as_potential(v_eff)
    a, b = float(x_range[0]), float(x_range[1])
    xs = np.linspace(a, b, n_scan)
    values = evaluate_potential(v, xs)
    v_minus = float(values[0]) if v_minus is None else float(v_minus)
    v_plus = float(values[-1]) if v_plus is None else float(v_plus)

    if E <= v_minus + offsets[0]:
        raise ScatteringError(f"E = {E} 不高于入射尾部 {v_minus + offsets[0]}，无传播通道", energy=E)

    k = int(np.argmax(values))
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, n_scan - 1)]
    refined = minimize_scalar(lambda z: -float(v(z)), bounds=(lo, hi), method='bounded', options={'xatol': 1e-12})
    v_max = max(float(values[k]), -float(refined.fun))
    if abs(E - v_max) <= TOP_TOL * max(1.0, abs(E)):
        raise ScatteringError(f"E = {E} 恰在势垒顶 {v_max}，不满足二分条件", energy=E)

    common = dict(energy=float(E), h=float(h), v_eff=v, x_range=(a, b), v_max=v_max)
    if E > v_max:
        if E <= v_plus + offsets[1]:
            raise ScatteringError(f"E = {E} 越过势垒但不高于出射通道阈值 {v_plus + offsets[1]}，出射通道关闭",
                                  energy=E)
        p_minus = float(np.sqrt(2.0 * (E - v_minus - offsets[0])))
        p_plus = float(np.sqrt(2.0 * (E - v_plus - offsets[1])))
        logger.debug(f"E = {E:.6g}: 通过, p₋ = {p_minus:.12g}, p₊ = {p_plus:.12g}")
        return ScatteringAsymptotics(outcome=ScatteringOutcome.TRANSMITTED, p_minus=p_minus, p_plus=p_plus,
                                     **common)

    j = int(np.nonzero(values >= E)[0][0])
    if j == 0:
        raise ScatteringError(f"E = {E} 在区间左端即已低于势", energy=E)
    x_f = brentq(lambda z: float(v(z)) - E, xs[j - 1], xs[j], xtol=1e-14)
    logger.debug(f"E = {E:.6g}: 反射, x_f = {x_f:.12g}")
    return ScatteringAsymptotics(outcome=ScatteringOutcome.REFLECTED, x_f=float(x_f),
                                 reflection_phase=complex(REFLECTION_PHASE), **common)
