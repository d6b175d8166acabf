"""
振幅输运、单值矩阵与Floquet指数

输运方程 dφ/dt + iℒ₁(p(t), x(t))φ = 0 沿轨道用经典四阶Runge–Kutta积分。
Floquet形式 z(t)e^{iβt} 给出 β = arg(λ)/T，λ 为单值矩阵特征值。
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ..exceptions import DimensionMismatch, NonUnimodularMonodromy, TrajectoryError
from ..log import create_logger_with_context, log_execution_time
from .fields import HamiltonianField
from .trajectories import Trajectory, integrate_trajectory

UNIMODULAR_TOL = 1e-8
CLOSED_FORM_TOL = 1e-8
PERIOD_T_MAX = 1e4


@dataclass(frozen=True, eq=False)
class TransportResult:
    """输运解

    Attributes:
        t: 采样时刻
        phi: 振幅，形状 (n_t, r)
        closed_form_deviation: 标量情形下与 exp(−i∫ℒ₁dt)φ₀ 的最大偏差
        norm_drift: max | ‖φ(t)‖ − ‖φ₀‖ |
    """

    t: np.ndarray
    phi: np.ndarray
    closed_form_deviation: Optional[float]
    norm_drift: float


def _rk4_step(field: HamiltonianField, dense, t: float, dt: float, phi: np.ndarray):
    """一步RK4；同时返回本步 ∫tr ℒ₁ 的Simpson值（标量情形即闭式积分）"""
    def generator(s):
        y = dense(s)
        return field.generator_matrix(y[1], y[0])

    L0, Lm, L1 = generator(t), generator(t + 0.5 * dt), generator(t + dt)
    k1 = -1j * L0 @ phi
    k2 = -1j * Lm @ (phi + 0.5 * dt * k1)
    k3 = -1j * Lm @ (phi + 0.5 * dt * k2)
    k4 = -1j * L1 @ (phi + dt * k3)
    integral = dt / 6.0 * (L0 + 4.0 * Lm + L1)
    return phi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), integral


def _propagate(field: HamiltonianField, dense, t_nodes: np.ndarray, phi0: np.ndarray, substeps: int):
    """在 t_nodes 上输出的RK4传播；phi0 可为向量或矩阵"""
    y0 = dense(t_nodes[0])
    out = [phi0]
    integrals = [np.zeros_like(field.generator_matrix(y0[1], y0[0]))]
    phi, total = phi0, integrals[0]
    for t_a, t_b in zip(t_nodes[:-1], t_nodes[1:]):
        dt = (t_b - t_a) / substeps
        for k in range(substeps):
            phi, step_integral = _rk4_step(field, dense, t_a + k * dt, dt, phi)
            total = total + step_integral
        out.append(phi)
        integrals.append(total)
    return np.array(out), np.array(integrals)


def transport_solve(field: HamiltonianField, trajectory: Trajectory, phi0: Sequence[complex],
                    substeps: int = 4) -> TransportResult:
    """沿轨道求解输运方程

    Args:
        field: 带生成元 ℒ₁ 的哈密顿场
        trajectory: integrate_trajectory 的结果
        phi0: 初始振幅，长度须等于 ℒ₁ 的维数
        substeps: 相邻采样时刻之间的RK4步数

    Returns:
        TransportResult
    """
    phi0 = np.atleast_1d(np.asarray(phi0, dtype=complex))
    r = field.generator_matrix(trajectory.p[0], trajectory.x[0]).shape[0]
    if phi0.ndim != 1 or phi0.shape[0] != r:
        raise DimensionMismatch(f"初始振幅维数 {phi0.shape} 与生成元维数 {r} 不匹配", expected=r,
                                actual=int(phi0.shape[0]))

    phi, integrals = _propagate(field, trajectory.dense, trajectory.t, phi0, substeps)
    norms = np.linalg.norm(phi, axis=1)
    norm_drift = float(np.abs(norms - np.linalg.norm(phi0)).max())

    deviation = None
    if r == 1:
        closed = np.exp(-1j * integrals[:, 0, 0]) * phi0[0]
        deviation = float(np.abs(phi[:, 0] - closed).max())
        if deviation > CLOSED_FORM_TOL:
            logger = create_logger_with_context({'component': 'semiclassics', 'operation': 'transport'})
            logger.warning(f"⚠️ 标量输运与闭式解偏差 {deviation:.3e} 超过 {CLOSED_FORM_TOL:.0e}")

    return TransportResult(t=trajectory.t, phi=phi, closed_form_deviation=deviation, norm_drift=norm_drift)


def _launch_momentum(field: HamiltonianField, E: float, x0: float) -> float:
    """H(p0, x0) = E 的正根 p0"""
    if not field.value(0.0, x0) < E:
        raise TrajectoryError(f"能量 E = {E} 不高于 H(0, x0) = {field.value(0.0, x0)}，x0 处无运动", "NO_ORBIT",
                              energy=E, x0=x0)
    hi = 1.0
    while field.value(hi, x0) < E:
        hi *= 2.0
        if hi > 1e8:
            raise TrajectoryError(f"无法为 E = {E} 找到动量括区", "NO_ORBIT", energy=E, x0=x0)
    return brentq(lambda p: field.value(p, x0) - E, 0.0, hi, xtol=1e-14)


def closed_orbit_period(field: HamiltonianField, E: float, x0: float, t_max: float = PERIOD_T_MAX):
    """能量 E 上经过 x0 的闭轨的周期

    先找 x 自上方回到 x0 的时刻，再找其后自下方第一次穿过 x0 的时刻，即周期。

    Returns:
        (p0, T)
    """
    p0 = _launch_momentum(field, E, x0)

    def down(t, y):
        return y[0] - x0
    down.direction = -1

    def up(t, y):
        return y[0] - x0
    up.direction = 1

    horizon = 10.0
    while horizon <= t_max:
        traj = integrate_trajectory(field, p0, x0, horizon, n_out=2, events=[down, up])
        t_down, t_up = traj.t_events
        if len(t_down):
            later = t_up[t_up > t_down[0]]
            if len(later):
                return p0, float(later[0])
        horizon *= 2.0
    raise TrajectoryError(f"在 t ≤ {t_max} 内未检测到闭轨（E = {E}, x0 = {x0}）", "NO_CLOSED_ORBIT",
                          energy=E, x0=x0)


def monodromy(field: HamiltonianField, p0: float, x0: float, period: float, n_steps: int = 2000) -> np.ndarray:
    """一个周期上的输运单值矩阵，从单位阵出发的RK4"""
    traj = integrate_trajectory(field, p0, x0, period, n_out=2)
    r = field.generator_matrix(p0, x0).shape[0]
    t_nodes = np.linspace(0.0, period, n_steps + 1)
    phi, _ = _propagate(field, traj.dense, t_nodes, np.eye(r, dtype=complex), substeps=1)
    return phi[-1]


def floquet_exponents(field: HamiltonianField, E: float, x0: float, period: Optional[float] = None,
                      tol: float = UNIMODULAR_TOL) -> np.ndarray:
    """能量 E 上闭轨的Floquet指数

    Args:
        field: 带生成元 ℒ₁ 的哈密顿场
        E: 能量
        x0: 闭轨上的一点（须满足 H(0, x0) < E）
        period: 已知周期；缺省时由回归检测
        tol: 单值矩阵特征值模偏离1的容差

    Returns:
        实数组 β_j ∈ (−π/T, π/T]，升序
    """
    p0 = _launch_momentum(field, E, x0)
    if period is None:
        p0, period = closed_orbit_period(field, E, x0)
    M = monodromy(field, p0, x0, period)
    multipliers = np.linalg.eigvals(M)
    deviation = float(np.abs(np.abs(multipliers) - 1.0).max())
    if deviation > tol:
        raise NonUnimodularMonodromy(f"单值矩阵特征值偏离单位圆 {deviation:.3e} > {tol:.0e}（ℒ₁ 非厄米？）",
                                     deviation=deviation)
    betas = np.angle(multipliers) / period
    betas[np.isclose(betas, -np.pi / period, rtol=0.0, atol=1e-14)] = np.pi / period
    return np.sort(betas)


@dataclass(frozen=True)
class SpectralEntry:
    nu: int
    n: int
    energy: float
    betas: np.ndarray
    shifted: np.ndarray


@dataclass
class SpectralSeries:
    """谱级数 E_j^{νn} = E^{νn} + hβ^j(E^{νn})"""

    h: float
    entries: List[SpectralEntry] = field(default_factory=list)

    def rows(self):
        """CSV行：每个 (n, j) 一行"""
        for entry in self.entries:
            for j, (beta, shifted) in enumerate(zip(entry.betas, entry.shifted)):
                yield {'nu': entry.nu, 'n': entry.n, 'j': j, 'E': entry.energy, 'beta': beta, 'E_shifted': shifted}

    def is_increasing(self) -> bool:
        energies = [e.energy for e in self.entries]
        return all(b > a for a, b in zip(energies, energies[1:]))


@log_execution_time()
def spectral_series(field: HamiltonianField, levels, nu: int = 1) -> SpectralSeries:
    """把 Bohr–Sommerfeld 能级与各自的Floquet指数配对

    Args:
        field: 带生成元的哈密顿场，H 与量子化所用的 v_eff 一致
        levels: bohr_sommerfeld 返回的 QuantizedLevels
        nu: 项编号（仅用于标注）
    """
    series = SpectralSeries(h=levels.h)
    for n, energy, (left, right) in zip(levels.n, levels.energies, levels.turning_points):
        betas = floquet_exponents(field, float(energy), 0.5 * (left + right))
        series.entries.append(SpectralEntry(nu=nu, n=int(n), energy=float(energy), betas=betas,
                                            shifted=float(energy) + levels.h * betas))
    return series
