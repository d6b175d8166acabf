"""
μ–h 区间分类与本质哈密顿量组装

约化方程按 t' = μt/h、x' = x 重标后写作
    ih ∂ψ/∂t = [(p^h)²/2 + v_eff¹ + λ^ν + (h²/μ)L₁(x, (μ/h)p^h) + ...]ψ,
其中 λ^ν = (h²/μ²)(ε^ν − ε^ν(x₀))，v_eff¹ = (h²/μ²)(v_ext − v_ext(x₀))。
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from ..exceptions import EssentialAssemblyError, RegimeError
from ..log import create_logger_with_context
from ..utils import UniformGrid, ensure_finite
from .corrections import CorrectionL1, PolynomialL1

POLYNOMIAL_TOL = 1e-8


class Regime(str, Enum):
    SHORT_WAVE = "ShortWave"
    MEDIUM_WAVE = "MediumWave"
    LONG_WAVE = "LongWave"
    ULTRA_SHORT_WAVE = "UltraShortWave"


# log h / log μ 的典型值
REGIME_EXPONENTS = {
    Regime.SHORT_WAVE: 1.0,
    Regime.MEDIUM_WAVE: 0.5,
    Regime.LONG_WAVE: 0.0,
    Regime.ULTRA_SHORT_WAVE: 1.25,
}


def classify_regime(mu: float, h: float) -> Regime:
    """按 log h / log μ 最近的典型指数分类，平局取 ShortWave

    Args:
        mu: 绝热参数，0 < μ < 1
        h: 半经典参数，须落在 (μ^{3/2}, 1] 内

    Returns:
        Regime
    """
    if not 0.0 < mu < 1.0:
        raise RegimeError(f"μ = {mu} 不在 (0, 1) 内", mu=mu, h=h)
    if not h > 0.0:
        raise RegimeError(f"h = {h} 必须为正", mu=mu, h=h)
    if not mu ** 1.5 < h <= 1.0:
        raise RegimeError(f"h = {h} 超出有效窗口 (μ^(3/2), 1] = ({mu ** 1.5:.3g}, 1]", mu=mu, h=h)
    exponent = np.log(h) / np.log(mu)
    ranked = sorted(REGIME_EXPONENTS.items(),
                    key=lambda item: (round(abs(exponent - item[1]), 12), item[0] != Regime.SHORT_WAVE))
    return ranked[0][0]


def h_for_regime(mu: float, regime) -> float:
    """区间对应的典型 h = μ^指数"""
    return float(mu ** REGIME_EXPONENTS[Regime(regime)])


def required_expansion_order(regime) -> int:
    """缠绕算子展开所需的最少阶数：半经典区间 N = 1，长波区间 N = 2"""
    return 2 if Regime(regime) == Regime.LONG_WAVE else 1


def accuracy_bound(h: float, mu: float, T0: float, residual_norm: float) -> float:
    """Cauchy问题估计 ‖ψ_as − ψ_ex‖ ≤ (h/μ²)·T₀·max‖f_as‖"""
    return h / mu ** 2 * T0 * residual_norm


@dataclass(frozen=True, eq=False)
class EffectiveModel:
    """单支约化模型

    Attributes:
        nu: 支编号
        heff: 有效哈密顿量（提供 v_ext、eps 采样）
        L1: 一阶修正，None 表示恒为零
        G: 几何势采样
        regime: 区间
        mu, h: 参数
        p_scale: L₁ 的 p 拟合尺度
    """

    nu: int
    heff: object
    L1: Optional[Union[CorrectionL1, PolynomialL1]]
    G: np.ndarray
    regime: Regime
    mu: float
    h: float
    p_scale: float = 1.0

    @property
    def x_grid(self) -> UniformGrid:
        return self.heff.x_grid

    @property
    def v_ext(self) -> np.ndarray:
        return self.heff.v_ext


def build_effective_model(heff, mu: float, h: Optional[float] = None, L1=None,
                          G=None, regime=None, p_scale: float = 1.0) -> EffectiveModel:
    """组装 EffectiveModel；只给定区间时 h 取该区间的典型值"""
    if h is None:
        if regime is None:
            raise RegimeError("必须给定 h 或区间", mu=mu)
        h = h_for_regime(mu, regime)
    classified = classify_regime(mu, h)
    if regime is not None and Regime(regime) != classified:
        raise RegimeError(f"区间 {Regime(regime).value} 与 (μ={mu}, h={h}) 的分类 {classified.value} 不一致",
                          mu=mu, h=h)
    G = np.zeros(heff.x_grid.n) if G is None else ensure_finite(np.asarray(G, float), "几何势", RegimeError)
    return EffectiveModel(nu=heff.nu, heff=heff, L1=L1, G=G, regime=classified, mu=mu, h=h, p_scale=p_scale)


@dataclass(frozen=True, eq=False)
class EssentialHamiltonian:
    """重标后的本质哈密顿量 kinetic·(p^h)² + c₁(x)·p^h + potential(x)，p^h = −ih∂x

    Attributes:
        kinetic: 动能系数（1/2 或 1/2 + μ·a₂）
        potential: 总有效势
        c1: 一阶系数
        zero_order: 被移出的常数 v_ext(x₀) + ε^ν(x₀)
        energy_scale: μ²/h²，重标能量与原能量之比
    """

    x_grid: UniformGrid
    kinetic: float
    potential: np.ndarray
    c1: np.ndarray
    zero_order: complex
    h: float
    energy_scale: float
    regime: Regime

    def __post_init__(self):
        for name in ("potential", "c1"):
            values = np.asarray(getattr(self, name))
            if values.shape != (self.x_grid.n,):
                raise EssentialAssemblyError(f"{name} 采样点数与x网格不一致")
            if not np.all(np.isfinite(values)):
                raise EssentialAssemblyError(f"{name} 含有非有限值")

    def to_physical(self, energies) -> np.ndarray:
        """重标能量 E' ↦ 原能量 zero_order + (μ²/h²)E'"""
        return np.real(self.zero_order) + self.energy_scale * np.asarray(energies)

    def shifted(self, constant: float) -> 'EssentialHamiltonian':
        return EssentialHamiltonian(self.x_grid, self.kinetic, self.potential + constant, self.c1,
                                    self.zero_order, self.h, self.energy_scale, self.regime)


def assemble_essential(model: EffectiveModel, tol: float = POLYNOMIAL_TOL) -> EssentialHamiltonian:
    """按区间组装本质哈密顿量

    Args:
        model: 约化模型
        tol: a₂ 的 x 无关性与多项式拟合的容差

    Returns:
        EssentialHamiltonian
    """
    logger = create_logger_with_context({'component': 'reduction', 'regime': model.regime.value})
    mu, h = model.mu, model.h
    if classify_regime(mu, h) != model.regime:
        raise RegimeError(f"区间 {model.regime.value} 与 (μ={mu}, h={h}) 不一致", mu=mu, h=h)

    s = h * h / (mu * mu)
    v_ext = np.asarray(model.heff.v_ext, dtype=float)
    eps = np.asarray(model.heff.eps, dtype=float)
    zero_order = complex(v_ext[0] + eps[0])
    base = s * (v_ext - v_ext[0]) + s * (eps - eps[0])

    n = model.x_grid.n
    if model.L1 is not None:
        fit = model.L1.polynomial(model.p_scale)
        a0, a1, a2 = fit.value(0), fit.value(1), fit.value(2)
        fit_residual = fit.residual
    else:
        a0 = a1 = a2 = np.zeros(n, dtype=complex)
        fit_residual = 0.0

    kinetic = 0.5
    if model.regime in (Regime.SHORT_WAVE, Regime.ULTRA_SHORT_WAVE):
        if model.regime == Regime.ULTRA_SHORT_WAVE and fit_residual > tol:
            raise EssentialAssemblyError(f"L₁ 不是 p 的二次多项式（拟合残差 {fit_residual:.3e}）",
                                         residual=fit_residual)
        if np.ptp(a2.real) > tol or np.abs(a2.imag).max() > tol:
            raise EssentialAssemblyError("L₁ 的 p² 系数随 x 变化，无法并入动能项", spread=float(np.ptp(a2.real)))
        potential = base + (h * h / mu) * a0
        c1 = h * a1
        kinetic = 0.5 + mu * float(a2.real.mean())
    elif model.regime == Regime.MEDIUM_WAVE:
        potential = base + (h * h / mu) * a0
        c1 = h * a1
    else:
        if np.abs(a0).max() > tol:
            raise EssentialAssemblyError(f"长波区间要求 L₁(x, 0) ≡ 0，实际 max|L₁(x,0)| = {np.abs(a0).max():.3e}",
                                         max_l1=float(np.abs(a0).max()))
        potential = base + np.asarray(model.G, dtype=float)
        c1 = h * a1

    imag = float(np.abs(np.imag(potential)).max())
    if imag > tol:
        logger.warning(f"⚠️ 总有效势含有虚部 {imag:.3e}，约化算子可能非厄米")
    else:
        potential = np.real(potential)
    essential = EssentialHamiltonian(
        x_grid=model.x_grid, kinetic=kinetic, potential=potential, c1=np.asarray(c1, dtype=complex),
        zero_order=zero_order, h=h, energy_scale=1.0 / s, regime=model.regime)
    logger.info(f"✅ 本质哈密顿量组装完成: h = {h:.4g}, 动能系数 {kinetic:.6g}")
    return essential
