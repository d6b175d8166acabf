"""
算子族与横向项源

OperatorFamily 把冻结 (p, x) 处的横向算子 H₀、∂pH₀、H₁ 作为对横向场的作用给出；
项源（term source）提供 χ₀ 及其 x、p 导数，供一阶修正使用。
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Protocol

import numpy as np

from ..exceptions import ReductionError
from ..transverse import (BranchDerivatives, ConfinementModel, TermBranch, TransverseOperator,
                          branch_x_derivatives, transverse_operator)
from ..symbols import apply_tridiagonal
from ..utils import UniformGrid, trapezoid_weights

FieldMap = Callable[[float, float, np.ndarray], np.ndarray]


class TermSource(Protocol):
    """沿x网格的零阶缠绕函数 χ₀(p, x_i, ·)"""

    x_grid: UniformGrid

    def chi0(self, p: float, i: int) -> np.ndarray: ...

    def dchi0_dx(self, p: float, i: int) -> np.ndarray: ...

    def dchi0_dp(self, p: float, i: int) -> np.ndarray: ...


def _zero_map(p: float, x: float, values: np.ndarray) -> np.ndarray:
    return np.zeros_like(values, dtype=complex)


@dataclass(frozen=True, eq=False)
class OperatorFamily:
    """冻结 (p, x) 处的横向算子族

    Attributes:
        apply_H0: H₀(p, x) 作用于横向场
        apply_dH0_dp: ∂pH₀(p, x) 作用于横向场
        apply_H1: H₁(p, x) 作用于横向场
        weights: 横向求积权重
        active: x ↦ 参与求解的横向节点掩码
        chi0_t: (p, i) ↦ ∂tχ₀，None 表示恒为零
        dense_H0: (p, x) ↦ 活动节点上的稠密 H₀；None 时逐列作用构造
    """

    apply_H0: FieldMap
    apply_dH0_dp: FieldMap
    weights: np.ndarray
    active: Callable[[float], np.ndarray]
    apply_H1: FieldMap = _zero_map
    chi0_t: Optional[Callable[[float, int], np.ndarray]] = None
    dense_H0: Optional[Callable[[float, float], np.ndarray]] = None

    def inner(self, u: np.ndarray, v: np.ndarray) -> complex:
        """⟨u, v⟩_y，第一个参数共轭"""
        return complex(np.sum(self.weights * np.conj(u) * v))

    def time_derivative(self, p: float, i: int, ny: int) -> np.ndarray:
        if self.chi0_t is None:
            return np.zeros(ny, dtype=complex)
        return np.asarray(self.chi0_t(p, i), dtype=complex)

    def matrix_H0(self, p: float, x: float) -> np.ndarray:
        """活动节点上 H₀(p, x) 的稠密矩阵"""
        if self.dense_H0 is not None:
            return np.asarray(self.dense_H0(p, x), dtype=complex)
        mask = self.active(x)
        idx = np.flatnonzero(mask)
        columns = []
        for j in idx:
            unit = np.zeros(len(mask), dtype=complex)
            unit[j] = 1.0
            columns.append(self.apply_H0(p, x, unit)[idx])
        return np.stack(columns, axis=1)

    def symmetry_defect(self, p: float, x: float, trials: int = 3, seed: int = 0) -> float:
        """随机试验场上 |⟨u, H₀v⟩ − ⟨H₀u, v⟩| 的最大值（相对）"""
        rng = np.random.default_rng(seed)
        mask = self.active(x)
        worst = 0.0
        for _ in range(trials):
            u = np.zeros(len(mask), dtype=complex)
            v = np.zeros(len(mask), dtype=complex)
            u[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
            v[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
            Hu, Hv = self.apply_H0(p, x, u), self.apply_H0(p, x, v)
            scale = max(1.0, abs(self.inner(u, Hv)))
            worst = max(worst, abs(self.inner(u, Hv) - self.inner(Hu, v)) / scale)
        return worst


def waveguide_family(model: ConfinementModel, y_grid: UniformGrid,
                     v_ext: Optional[Callable[[float], float]] = None) -> OperatorFamily:
    """直波导 H = p²/2 − ½∂²_y + v(x, y) + v_ext(x) 的算子族

    H₁ ≡ 0，∂pH₀ = p，χ₀ 与时间无关。
    """
    cache: Dict[float, TransverseOperator] = {}
    shift = (lambda x: 0.0) if v_ext is None else v_ext

    def operator(x: float) -> TransverseOperator:
        key = float(x)
        if key not in cache:
            cache[key] = transverse_operator(model, key, y_grid)
        return cache[key]

    def apply_H0(p, x, values):
        op = operator(x)
        values = np.asarray(values, dtype=complex)
        return apply_tridiagonal(op.bands(), values) + (0.5 * p * p + float(shift(x))) * values * op.mask

    def apply_dH0_dp(p, x, values):
        return p * np.asarray(values, dtype=complex) * operator(x).mask

    def dense_H0(p, x):
        op = operator(x)
        return op.dense().astype(complex) + (0.5 * p * p + float(shift(x))) * np.eye(op.n_active)

    return OperatorFamily(
        apply_H0=apply_H0,
        apply_dH0_dp=apply_dH0_dp,
        weights=trapezoid_weights(y_grid.n, y_grid.step),
        active=lambda x: model.active_mask(float(x), y_grid.points),
        dense_H0=dense_H0,
    )


@dataclass(eq=False)
class BranchTerm:
    """由横向支构造的项源：χ₀ = w^ν(x, y)，与 p 无关"""

    branch: TermBranch
    _derivatives: Optional[BranchDerivatives] = field(default=None, init=False, repr=False)

    @property
    def x_grid(self) -> UniformGrid:
        return self.branch.x_grid

    @property
    def derivatives(self) -> BranchDerivatives:
        if self._derivatives is None:
            self._derivatives = branch_x_derivatives(self.branch)
        return self._derivatives

    def chi0(self, p: float, i: int) -> np.ndarray:
        return self.branch.w[i].astype(complex)

    def dchi0_dx(self, p: float, i: int) -> np.ndarray:
        return self.derivatives.d_w[i].astype(complex)

    def dchi0_dp(self, p: float, i: int) -> np.ndarray:
        return np.zeros(self.branch.y_grid.n, dtype=complex)


def as_term_source(term) -> TermSource:
    """TermBranch 自动包装为 BranchTerm；其它对象须实现 TermSource"""
    if isinstance(term, TermBranch):
        return BranchTerm(term)
    for name in ("x_grid", "chi0", "dchi0_dx", "dchi0_dp"):
        if not hasattr(term, name):
            raise ReductionError(f"项源缺少 {name}", "MISSING_DERIVATIVE_DATA", source=type(term).__name__)
    return term
