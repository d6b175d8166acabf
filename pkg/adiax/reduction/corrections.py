"""
一阶修正 L₁ 与 χ₁

L₁ = ⟨χ₀, H₁χ₀⟩ − ⟨χ₀, F₁⟩，其中 F₁ = i∂tχ₀ + i∂pH₀·∂xχ₀ − i∂xH_eff·∂pχ₀。
χ₁ 由 (H₀ − H_eff)χ₁ = F₁ − H₁χ₀ + χ₀L₁ 在约束 ⟨χ₀, χ₁⟩ = 0 下求得。
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, solve

from ..exceptions import ReductionError, SolvabilityError
from ..log import create_logger_with_context, log_execution_time
from ..symbols import P_SAMPLES
from .family import OperatorFamily, as_term_source

SOLVABILITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class L1Polynomial:
    """L₁ 在 p 方向的二次拟合：coeffs[k, i] 为 x_i 处 p^k 的系数"""

    coeffs: np.ndarray
    residual: float
    p_scale: float

    def value(self, k: int) -> np.ndarray:
        return self.coeffs[k] if k < len(self.coeffs) else np.zeros(self.coeffs.shape[1], dtype=complex)


class CorrectionL1:
    """一阶约化修正 L₁(p, x) 的求值器"""

    def __init__(self, term, family: OperatorFamily, heff):
        self.term = as_term_source(term)
        self.family = family
        self.heff = heff
        self.x_grid = self.term.x_grid
        self.logger = create_logger_with_context({'component': 'reduction', 'operation': 'L1'})

    def _fields(self, p: float, i: int):
        chi = np.asarray(self.term.chi0(p, i), dtype=complex)
        if chi.shape != self.family.weights.shape:
            raise ReductionError(f"χ₀ 横向点数 {chi.shape} 与算子族 {self.family.weights.shape} 不一致",
                                 "GRID_MISMATCH")
        d_x = np.asarray(self.term.dchi0_dx(p, i), dtype=complex)
        d_p = np.asarray(self.term.dchi0_dp(p, i), dtype=complex)
        d_t = self.family.time_derivative(p, i, len(chi))
        return chi, d_x, d_p, d_t

    def F1(self, p: float, i: int) -> np.ndarray:
        """F₁ = i∂tχ₀ + i∂pH₀·∂xχ₀ − i∂xH_eff·∂pχ₀"""
        x = float(self.x_grid.points[i])
        chi, d_x, d_p, d_t = self._fields(p, i)
        return 1j * d_t + 1j * self.family.apply_dH0_dp(p, x, d_x) - 1j * self.heff.dx(p, i) * d_p

    def terms(self, p: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """L₁ 的三项分解

        Returns:
            (⟨χ₀, H₁χ₀⟩, −i⟨χ₀, dχ₀/dt⟩, −i⟨χ₀, (∂pH₀ − ∂pH_eff)∂xχ₀⟩)，各为长度 nx 的数组；
            dχ₀/dt 为沿 H_eff 流的全导数
        """
        inner = self.family.inner
        n = self.x_grid.n
        t_h1 = np.empty(n, dtype=complex)
        t_dt = np.empty(n, dtype=complex)
        t_dp = np.empty(n, dtype=complex)
        for i, x in enumerate(self.x_grid.points):
            chi, d_x, d_p, d_t = self._fields(p, i)
            heff_p = self.heff.dp(p, i)
            t_h1[i] = inner(chi, self.family.apply_H1(p, x, chi))
            t_dt[i] = -1j * inner(chi, d_t + heff_p * d_x - self.heff.dx(p, i) * d_p)
            t_dp[i] = -1j * (inner(chi, self.family.apply_dH0_dp(p, x, d_x)) - heff_p * inner(chi, d_x))
        for name, values in (("⟨χ₀,H₁χ₀⟩", t_h1), ("dχ₀/dt", t_dt), ("∂pH₀−∂pH_eff", t_dp)):
            if not np.all(np.isfinite(values)):
                raise ReductionError(f"L₁ 的 {name} 项含有非有限值", "NONFINITE_RESULT", p=p)
        return t_h1, t_dt, t_dp

    def values(self, p: float) -> np.ndarray:
        t_h1, t_dt, t_dp = self.terms(p)
        return t_h1 + t_dt + t_dp

    def __call__(self, p: float, x=None):
        values = self.values(p)
        if x is None:
            return values
        xs = self.x_grid.points
        return np.interp(x, xs, values.real) + 1j * np.interp(x, xs, values.imag)

    def polynomial(self, p_scale: float = 1.0, degree: int = 2) -> L1Polynomial:
        """在 P_SAMPLES·p_scale 上对 p 做最小二乘多项式拟合"""
        p_samples = np.asarray(P_SAMPLES) * p_scale
        samples = np.stack([self.values(p) for p in p_samples])
        vander = np.vander(p_samples, degree + 1, increasing=True)
        coeffs, *_ = np.linalg.lstsq(vander, samples, rcond=None)
        misfit = float(np.abs(vander @ coeffs - samples).max())
        residual = misfit / max(1.0, float(np.abs(samples).max()))
        self.logger.debug(f"📊 L₁ 的 {degree} 次拟合残差 {residual:.3e}")
        return L1Polynomial(coeffs=coeffs, residual=residual, p_scale=p_scale)


def correction_L1(term, family: OperatorFamily, heff) -> CorrectionL1:
    """构造一阶修正 L₁ 并在 p = 0 处检查其有限性

    Args:
        term: TermBranch 或实现 TermSource 的项源
        family: 与项源一致的算子族
        heff: 有效哈密顿量求值器（提供 dp、dx）

    Returns:
        CorrectionL1
    """
    l1 = CorrectionL1(term, family, heff)
    values = l1.values(0.0)
    l1.logger.info(f"✅ L₁ 构造完成, max|L₁(0, x)| = {np.abs(values).max():.3e}")
    return l1


@dataclass(frozen=True, eq=False)
class Chi1Samples:
    """χ₁ 在 p 采样点与 x 节点上的取值

    Attributes:
        p_samples: p 采样点
        values: 形状 (n_p, nx, ny)
        solvability: 每个 (p, x) 处右端与 χ₀ 的内积模
        residual: 方程残差的最大模
    """

    p_samples: Tuple[float, ...]
    values: np.ndarray
    solvability: np.ndarray
    residual: float


@log_execution_time()
def correction_chi1(term, family: OperatorFamily, heff, L1: CorrectionL1,
                    F1: Optional[Callable[[float, int], np.ndarray]] = None,
                    p_samples: Optional[Sequence[float]] = None,
                    tol: float = SOLVABILITY_TOL) -> Chi1Samples:
    """求解一阶缠绕修正 χ₁

    在活动横向节点上解加边系统
        [ H₀ − H_eff   χ₀ ] [χ₁]   [rhs]
        [ χ₀ᴴW          0 ] [ λ ] = [ 0 ]
    λ 吸收右端沿 χ₀ 的分量（可解时应为零）。

    Args:
        term: 项源
        family: 算子族
        heff: 有效哈密顿量
        L1: 一阶修正
        F1: F₁(p, i)，默认取 L1.F1
        p_samples: p 采样点，默认 P_SAMPLES
        tol: 可解性容差（相对右端最大模）

    Returns:
        Chi1Samples
    """
    logger = create_logger_with_context({'component': 'reduction', 'operation': 'chi1'})
    term = as_term_source(term)
    F1 = F1 or L1.F1
    p_samples = tuple(float(p) for p in (P_SAMPLES if p_samples is None else p_samples))
    xs = term.x_grid.points
    ny = len(family.weights)

    values = np.zeros((len(p_samples), len(xs), ny), dtype=complex)
    solvability = np.zeros((len(p_samples), len(xs)))
    residual = 0.0
    for a, p in enumerate(p_samples):
        l1_values = L1.values(p)
        for i, x in enumerate(xs):
            chi = np.asarray(term.chi0(p, i), dtype=complex)
            rhs_full = F1(p, i) - family.apply_H1(p, x, chi) + chi * l1_values[i]
            idx = np.flatnonzero(family.active(x))
            c, rhs, w = chi[idx], rhs_full[idx], family.weights[idx]

            gap = complex(np.sum(w * np.conj(c) * rhs))
            scale = max(1.0, float(np.abs(rhs).max()))
            solvability[a, i] = abs(gap)
            if abs(gap) > tol * scale:
                raise SolvabilityError(f"p = {p:.4g}, x = {x:.6g} 处可解性残差 {abs(gap):.3e} 超出容差",
                                       residual=abs(gap))

            A = family.matrix_H0(p, x) - heff.at_node(p, i) * np.eye(len(idx))
            bordered = np.zeros((len(idx) + 1, len(idx) + 1), dtype=complex)
            bordered[:-1, :-1] = A
            bordered[:-1, -1] = c
            bordered[-1, :-1] = w * np.conj(c)
            try:
                sol = solve(bordered, np.append(rhs, 0.0))
            except LinAlgError as e:
                raise SolvabilityError(f"p = {p:.4g}, x = {x:.6g} 处受约束系统奇异: {e}") from e
            if not np.all(np.isfinite(sol)):
                raise ReductionError(f"p = {p:.4g}, x = {x:.6g} 处 χ₁ 含有非有限值", "NONFINITE_RESULT")

            values[a, i, idx] = sol[:-1]
            residual = max(residual, float(np.abs(A @ sol[:-1] + sol[-1] * c - rhs).max()) / scale)

    logger.info(f"✅ χ₁ 求解完成: 最大可解性残差 {solvability.max():.3e}, 方程残差 {residual:.3e}")
    return Chi1Samples(p_samples=p_samples, values=values, solvability=solvability, residual=residual)


@dataclass(frozen=True, eq=False)
class PolynomialL1:
    """系数直接给定的 L₁(p, x) = a₀(x) + a₁(x)p + a₂(x)p²"""

    x_grid: object
    coeffs: np.ndarray

    def values(self, p: float) -> np.ndarray:
        powers = p ** np.arange(len(self.coeffs))
        return np.tensordot(powers, np.asarray(self.coeffs, dtype=complex), axes=(0, 0))

    def __call__(self, p: float, x=None):
        values = self.values(p)
        if x is None:
            return values
        xs = self.x_grid.points
        return np.interp(x, xs, values.real) + 1j * np.interp(x, xs, values.imag)

    def polynomial(self, p_scale: float = 1.0, degree: int = 2) -> L1Polynomial:
        return L1Polynomial(coeffs=np.asarray(self.coeffs, dtype=complex), residual=0.0, p_scale=p_scale)
