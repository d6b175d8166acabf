"""
一维哈密顿场

H(p, x) 及其导数；未给出解析导数时使用中心差分。
可选的输运生成元 ℒ₁(p, x) 为标量或 r×r 复矩阵。
"""

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ..exceptions import TrajectoryError

Scalar2 = Callable[[float, float], float]


@dataclass(frozen=True, eq=False)
class HamiltonianField:
    """哈密顿场

    Attributes:
        H: H(p, x)
        H_p, H_x: 解析一阶导数（可选）
        hessian: (p, x) ↦ (H_pp, H_px, H_xx)（可选）
        generator: 输运生成元 ℒ₁(p, x)（可选）
        step: 差分步长
    """

    H: Scalar2
    H_p: Optional[Scalar2] = None
    H_x: Optional[Scalar2] = None
    hessian: Optional[Callable[[float, float], Tuple[float, float, float]]] = None
    generator: Optional[Callable[[float, float], object]] = None
    step: float = 1e-5

    def value(self, p: float, x: float) -> float:
        return float(self.H(p, x))

    def fd_dp(self, p: float, x: float) -> float:
        s = self.step
        return (self.value(p + s, x) - self.value(p - s, x)) / (2.0 * s)

    def fd_dx(self, p: float, x: float) -> float:
        s = self.step
        return (self.value(p, x + s) - self.value(p, x - s)) / (2.0 * s)

    def dp(self, p: float, x: float) -> float:
        return float(self.H_p(p, x)) if self.H_p is not None else self.fd_dp(p, x)

    def dx(self, p: float, x: float) -> float:
        return float(self.H_x(p, x)) if self.H_x is not None else self.fd_dx(p, x)

    def second(self, p: float, x: float) -> Tuple[float, float, float]:
        """(H_pp, H_px, H_xx)"""
        if self.hessian is not None:
            return tuple(float(v) for v in self.hessian(p, x))
        s = self.step
        h_pp = (self.dp(p + s, x) - self.dp(p - s, x)) / (2.0 * s)
        h_px = (self.dp(p, x + s) - self.dp(p, x - s)) / (2.0 * s)
        h_xx = (self.dx(p, x + s) - self.dx(p, x - s)) / (2.0 * s)
        return h_pp, h_px, h_xx

    def generator_matrix(self, p: float, x: float) -> np.ndarray:
        """ℒ₁(p, x) 统一为复方阵；未给出生成元时为 1×1 零矩阵"""
        if self.generator is None:
            return np.zeros((1, 1), dtype=complex)
        value = np.atleast_2d(np.asarray(self.generator(p, x), dtype=complex))
        if value.shape[0] != value.shape[1]:
            raise TrajectoryError(f"输运生成元须为方阵，实际形状 {value.shape}", "GENERATOR_SHAPE")
        return value

    def derivative_defect(self, samples: Iterable[Tuple[float, float]]) -> float:
        """解析导数与差分导数的最大偏差；无解析导数时为 0"""
        worst = 0.0
        for p, x in samples:
            if self.H_p is not None:
                worst = max(worst, abs(self.dp(p, x) - self.fd_dp(p, x)))
            if self.H_x is not None:
                worst = max(worst, abs(self.dx(p, x) - self.fd_dx(p, x)))
        return worst

    def with_generator(self, generator) -> 'HamiltonianField':
        return HamiltonianField(self.H, self.H_p, self.H_x, self.hessian, generator, self.step)

    @classmethod
    def free(cls, generator=None) -> 'HamiltonianField':
        """H = p²/2"""
        return cls(H=lambda p, x: 0.5 * p * p, H_p=lambda p, x: p, H_x=lambda p, x: 0.0,
                   hessian=lambda p, x: (1.0, 0.0, 0.0), generator=generator)

    @classmethod
    def harmonic(cls, omega: float = 1.0, generator=None) -> 'HamiltonianField':
        """H = p²/2 + ω²x²/2"""
        w2 = omega * omega
        return cls(H=lambda p, x: 0.5 * p * p + 0.5 * w2 * x * x, H_p=lambda p, x: p,
                   H_x=lambda p, x: w2 * x, hessian=lambda p, x: (1.0, 0.0, w2), generator=generator)

    @classmethod
    def from_potential(cls, v: Callable[[float], float], dv: Optional[Callable[[float], float]] = None,
                       generator=None, step: float = 1e-5) -> 'HamiltonianField':
        """H = p²/2 + v(x)"""
        H_x = (lambda p, x: float(dv(x))) if dv is not None else None
        return cls(H=lambda p, x: 0.5 * p * p + float(v(x)), H_p=lambda p, x: p, H_x=H_x,
                   generator=generator, step=step)

    @classmethod
    def from_samples(cls, x_nodes: np.ndarray, v_nodes: np.ndarray, generator=None) -> 'HamiltonianField':
        """x 网格上的有效势采样，三次样条插值，差分步长取网格间距的 1/10"""
        spline = CubicSpline(np.asarray(x_nodes, float), np.asarray(v_nodes, float))
        step = 0.1 * float(np.min(np.diff(x_nodes)))
        return cls(H=lambda p, x: 0.5 * p * p + float(spline(x)), H_p=lambda p, x: p,
                   H_x=lambda p, x: float(spline(x, 1)), generator=generator, step=step)
