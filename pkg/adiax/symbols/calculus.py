"""
μ展开符号演算

符号按 "x在左、p在右" 量子化：Op[c(x)p^m]u = c(x)(−iμ∂x)^m u。
p方向以多项式精确表示，x方向的k阶导数用八阶中心模板直接计算，端点处使用同阶单侧闭合。
"""

from dataclasses import dataclass
from math import factorial
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import SymbolError
from ..utils import UniformGrid, finite_difference

SCALAR = "scalar"
FIELD = "field"
OPERATOR = "operator"
KINDS = (SCALAR, FIELD, OPERATOR)

# 残差采样的p值集合（再乘以用户给定的尺度）
P_SAMPLES = (-1.0, -0.5, 0.0, 0.5, 1.0)


def apply_tridiagonal(bands: np.ndarray, field: np.ndarray) -> np.ndarray:
    """三对角带状算子作用于横向场

    bands[..., 0, i] = A[i, i-1], bands[..., 1, i] = A[i, i], bands[..., 2, i] = A[i, i+1]
    """
    out = bands[..., 1, :] * field
    out[..., 1:] += bands[..., 0, 1:] * field[..., :-1]
    out[..., :-1] += bands[..., 2, :-1] * field[..., 1:]
    return out


@dataclass(frozen=True, eq=False)
class PSymbol:
    """p的多项式，系数在x网格上采样

    coeffs 形状:
      scalar:   (d+1, nx)
      field:    (d+1, nx, ny)      横向场值系数
      operator: (d+1, nx, 3, ny)   三对角横向算子系数
    """

    coeffs: np.ndarray
    kind: str = SCALAR

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        expected_ndim = {SCALAR: 2, FIELD: 3, OPERATOR: 4}
        if self.kind not in KINDS:
            raise SymbolError(f"未知的系数类型: {self.kind}")
        if coeffs.ndim != expected_ndim[self.kind]:
            raise SymbolError(f"{self.kind} 符号系数应为 {expected_ndim[self.kind]} 维, 实际 {coeffs.ndim} 维",
                              "SYMBOL_SHAPE")
        if self.kind == OPERATOR and coeffs.shape[2] != 3:
            raise SymbolError("算子值系数须为三对角带状存储 (..., 3, ny)", "SYMBOL_SHAPE")
        if not np.all(np.isfinite(coeffs)):
            raise SymbolError("符号系数含有非有限值", "SYMBOL_NONFINITE")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def nx(self) -> int:
        return self.coeffs.shape[1]

    @property
    def ny(self) -> Optional[int]:
        return None if self.kind == SCALAR else self.coeffs.shape[-1]

    def dp(self, k: int = 1) -> 'PSymbol':
        """p方向k阶导数（精确）"""
        if k == 0:
            return self
        if k > self.degree:
            return PSymbol(np.zeros((1,) + self.coeffs.shape[1:], dtype=complex), self.kind)
        m = np.arange(k, self.degree + 1)
        falling = np.array([factorial(i) // factorial(i - k) for i in m], dtype=float)
        shape = (-1,) + (1,) * (self.coeffs.ndim - 1)
        return PSymbol(self.coeffs[k:] * falling.reshape(shape), self.kind)

    def dx(self, step: float, k: int = 1) -> 'PSymbol':
        """x方向k阶导数"""
        if k == 0:
            return self
        return PSymbol(finite_difference(self.coeffs, step, k, axis=1), self.kind)

    def evaluate(self, p: float) -> np.ndarray:
        """在给定p处求值"""
        powers = p ** np.arange(self.degree + 1)
        return np.tensordot(powers, self.coeffs, axes=(0, 0))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    @classmethod
    def zeros(cls, kind: str, nx: int, ny: Optional[int] = None, degree: int = 0) -> 'PSymbol':
        tail = {SCALAR: (), FIELD: (ny,), OPERATOR: (3, ny)}[kind]
        return cls(np.zeros((degree + 1, nx) + tail, dtype=complex), kind)

    @classmethod
    def fit_from_samples(cls, p_samples: Sequence[float], values: np.ndarray, degree: int,
                         kind: str = FIELD) -> 'PSymbol':
        """由p采样值做最小二乘多项式拟合

        Args:
            p_samples: p采样点
            values: 形状 (n_p, nx, ...) 的采样值
            degree: 多项式次数
        """
        p_samples = np.asarray(p_samples, dtype=float)
        values = np.asarray(values, dtype=complex)
        if len(p_samples) <= degree:
            raise SymbolError(f"{len(p_samples)} 个采样点不足以拟合 {degree} 次多项式", "SYMBOL_FIT")
        vander = np.vander(p_samples, degree + 1, increasing=True)
        flat = values.reshape(len(p_samples), -1)
        coeffs, *_ = np.linalg.lstsq(vander, flat, rcond=None)
        return cls(coeffs.reshape((degree + 1,) + values.shape[1:]), kind)


def _product(a: np.ndarray, kind_a: str, b: np.ndarray, kind_b: str) -> Tuple[np.ndarray, str]:
    """同一p幂次系数的逐点乘积（含算子作用）"""
    if kind_a == SCALAR and kind_b == SCALAR:
        return a * b, SCALAR
    if kind_a == SCALAR and kind_b == FIELD:
        return a[:, None] * b, FIELD
    if kind_a == FIELD and kind_b == SCALAR:
        return a * b[:, None], FIELD
    if kind_a == OPERATOR and kind_b == FIELD:
        if a.shape[-1] != b.shape[-1]:
            raise SymbolError(f"横向网格不一致: {a.shape[-1]} vs {b.shape[-1]}", "TRANSVERSE_GRID_MISMATCH")
        return apply_tridiagonal(a, b), FIELD
    if kind_a == SCALAR and kind_b == OPERATOR:
        return a[:, None, None] * b, OPERATOR
    if kind_a == OPERATOR and kind_b == SCALAR:
        return a * b[:, None, None], OPERATOR
    raise SymbolError(f"不支持的组合: {kind_a} ∘ {kind_b}", "SYMBOL_KIND")


def multiply(a: PSymbol, b: PSymbol) -> PSymbol:
    """p多项式乘积，系数按类型逐点相乘"""
    terms: Dict[int, np.ndarray] = {}
    kind = None
    for m in range(a.degree + 1):
        for n in range(b.degree + 1):
            value, kind = _product(a.coeffs[m], a.kind, b.coeffs[n], b.kind)
            terms[m + n] = terms[m + n] + value if m + n in terms else value
    degree = a.degree + b.degree
    return PSymbol(np.stack([terms[j] for j in range(degree + 1)]), kind)


def add(a: PSymbol, b: PSymbol) -> PSymbol:
    if a.kind != b.kind:
        raise SymbolError(f"不能相加不同类型的符号: {a.kind} + {b.kind}", "SYMBOL_KIND")
    degree = max(a.degree, b.degree)
    out = np.zeros((degree + 1,) + a.coeffs.shape[1:], dtype=complex)
    out[:a.degree + 1] += a.coeffs
    out[:b.degree + 1] += b.coeffs
    return PSymbol(out, a.kind)


def scale(a: PSymbol, factor: complex) -> PSymbol:
    return PSymbol(a.coeffs * factor, a.kind)


@dataclass(frozen=True, eq=False)
class MuSymbol:
    """μ的截断级数 Σ_j μ^j A_j(p, x)"""

    orders: Tuple[PSymbol, ...]
    x_grid: UniformGrid

    def __post_init__(self):
        orders = tuple(self.orders)
        if not orders:
            raise SymbolError("MuSymbol 至少需要一个阶")
        kinds = {o.kind for o in orders}
        if len(kinds) != 1:
            raise SymbolError(f"同一符号中混合了系数类型: {sorted(kinds)}", "SYMBOL_KIND")
        for o in orders:
            if o.nx != self.x_grid.n:
                raise SymbolError(f"系数x节点数 {o.nx} 与网格 {self.x_grid.n} 不一致", "GRID_MISMATCH")
        if len({o.ny for o in orders}) != 1:
            raise SymbolError("各阶横向网格不一致", "TRANSVERSE_GRID_MISMATCH")
        object.__setattr__(self, "orders", orders)

    @property
    def max_mu_order(self) -> int:
        return len(self.orders) - 1

    @property
    def p_degree(self) -> int:
        return max(o.degree for o in self.orders)

    @property
    def kind(self) -> str:
        return self.orders[0].kind

    @property
    def ny(self) -> Optional[int]:
        return self.orders[0].ny

    def order(self, j: int) -> Optional[PSymbol]:
        return self.orders[j] if j <= self.max_mu_order else None

    @classmethod
    def identity(cls, x_grid: UniformGrid) -> 'MuSymbol':
        return cls((PSymbol(np.ones((1, x_grid.n))),), x_grid)

    @classmethod
    def from_orders(cls, orders: Sequence[PSymbol], x_grid: UniformGrid) -> 'MuSymbol':
        return cls(tuple(orders), x_grid)


def compose(A: MuSymbol, B: MuSymbol, N: int) -> MuSymbol:
    """两个符号乘积算子的截断符号

    μ^j 项为 Σ_{a+b+k=j} ((−i)^k/k!) ∂p^k A_a · ∂x^k B_b。

    Args:
        A: 左因子
        B: 右因子
        N: 保留的最高μ阶

    Returns:
        0..N 阶的 MuSymbol
    """
    if not A.x_grid.matches(B.x_grid):
        raise SymbolError("两个符号的x网格不一致", "GRID_MISMATCH")
    limit = A.max_mu_order + B.max_mu_order + A.p_degree
    if N < 0 or N > limit:
        raise SymbolError(f"截断阶 N={N} 超出可表示范围 [0, {limit}]", "ORDER_OUT_OF_RANGE")

    step = A.x_grid.step
    dx_cache: Dict[Tuple[int, int], PSymbol] = {}

    def dx_of(b: int, k: int) -> PSymbol:
        if (b, k) not in dx_cache:
            dx_cache[(b, k)] = B.orders[b].dx(step, k)
        return dx_cache[(b, k)]

    orders = []
    for j in range(N + 1):
        total: Optional[PSymbol] = None
        for a in range(min(j, A.max_mu_order) + 1):
            for k in range(j - a + 1):
                b = j - a - k
                if b > B.max_mu_order or k > A.orders[a].degree:
                    continue
                term = scale(multiply(A.orders[a].dp(k), dx_of(b, k)), (-1j) ** k / factorial(k))
                total = term if total is None else add(total, term)
        if total is None:
            total = multiply(PSymbol.zeros(A.kind, A.x_grid.n, A.ny), PSymbol.zeros(B.kind, B.x_grid.n, B.ny))
        orders.append(total)
    return MuSymbol(tuple(orders), A.x_grid)
