"""
约化恒等式的逐阶残差

检验 χ∘L + iμ χ_t − H∘χ 在各μ阶上的系数是否为零。
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import SymbolError
from ..log import create_logger_with_context
from .calculus import FIELD, P_SAMPLES, MuSymbol, PSymbol, add, compose, scale


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """逐阶残差

    Attributes:
        norms: 第j项为μ^j系数在 (p采样, x, y) 上的最大模
        samples: 每阶在p采样点上的取值，形状 (N+1, n_p, nx[, ny])
        p_samples: 实际使用的p采样点
    """

    norms: np.ndarray
    samples: np.ndarray
    p_samples: Tuple[float, ...]

    @property
    def max_order(self) -> int:
        return len(self.norms) - 1

    def total(self, mu: float) -> float:
        """截断级数 Σ_j μ^j R_j 在采样集上的最大模"""
        weights = mu ** np.arange(self.max_order + 1)
        combined = np.tensordot(weights, self.samples, axes=(0, 0))
        return float(np.max(np.abs(combined)))


def reduction_residual(H: MuSymbol, chi: MuSymbol, L: MuSymbol, chi_t: Optional[MuSymbol],
                       N: int, p_scale: float = 1.0) -> ResidualReport:
    """计算约化恒等式的逐阶残差

    Args:
        H: 算子值（三对角）哈密顿符号
        chi: 场值缠绕符号
        L: 标量约化符号
        chi_t: χ 的时间导数符号，None 表示恒为零
        N: 最高检验阶
        p_scale: p采样集的缩放因子

    Returns:
        ResidualReport
    """
    logger = create_logger_with_context({'component': 'symbols', 'operation': 'reduction_residual'})
    if chi.kind != FIELD:
        raise SymbolError("χ 必须是横向场值符号", "SYMBOL_KIND")
    if L.kind != "scalar":
        raise SymbolError("L 必须是标量符号", "SYMBOL_KIND")
    if H.ny != chi.ny:
        raise SymbolError(f"H 与 χ 的横向网格不一致: {H.ny} vs {chi.ny}", "TRANSVERSE_GRID_MISMATCH")

    left = _compose_to(chi, L, N)
    right = _compose_to(H, chi, N)

    orders = []
    for j in range(N + 1):
        term = add(left.orders[j], scale(right.orders[j], -1.0))
        if chi_t is not None and j >= 1 and j - 1 <= chi_t.max_mu_order:
            if chi_t.ny != chi.ny:
                raise SymbolError("χ_t 与 χ 的横向网格不一致", "TRANSVERSE_GRID_MISMATCH")
            term = add(term, scale(chi_t.orders[j - 1], 1j))
        orders.append(term)

    p_samples = tuple(p_scale * p for p in P_SAMPLES)
    samples = np.stack([np.stack([order.evaluate(p) for p in p_samples]) for order in orders])
    norms = np.abs(samples).reshape(N + 1, -1).max(axis=1)
    logger.debug(f"📊 逐阶残差: {', '.join(f'{n:.3e}' for n in norms)}")
    return ResidualReport(norms=norms, samples=samples, p_samples=p_samples)


def _compose_to(A: MuSymbol, B: MuSymbol, N: int) -> MuSymbol:
    """复合到N阶；超出可表示阶的部分恒为零，补零阶"""
    limit = A.max_mu_order + B.max_mu_order + A.p_degree
    result = compose(A, B, min(N, limit))
    if N <= limit:
        return result
    last = result.orders[-1]
    zero = PSymbol(np.zeros_like(last.coeffs[:1]), last.kind)
    return MuSymbol(result.orders + (zero,) * (N - limit), result.x_grid)


def fit_slope(mus: Sequence[float], values: Sequence[float]) -> float:
    """log–log 最小二乘斜率"""
    slope, _ = np.polyfit(np.log(np.asarray(mus, dtype=float)), np.log(np.asarray(values, dtype=float)), 1)
    return float(slope)
