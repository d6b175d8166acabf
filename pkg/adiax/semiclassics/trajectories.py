"""
哈密顿轨道、轨道族与无焦散WKB波列

采用标准符号 ẋ = ∂H/∂p, ṗ = −∂H/∂x；作用量 S 沿轨道积分 p·∂H/∂p − H，
Jacobian J = ∂x/∂x₀ 由变分方程给出。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline, PchipInterpolator

from ..exceptions import CausticEncountered, TrajectoryError
from ..log import create_logger_with_context
from .fields import HamiltonianField

RTOL = 1e-12
ATOL = 1e-12
J_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Trajectory:
    """单条轨道的采样

    Attributes:
        t: 采样时刻
        x, p: 位置与动量
        S: 沿轨道的作用量（S(0) = 0）
        J: Jacobian δx
        dp_var: 变分动量 δp
        dense: t ↦ 状态 [x, p, S, δx, δp] 的连续插值
        phi: 输运振幅（由 transport_solve 填充，可选）
        t_events: 事件时刻（仅在传入 events 时）
    """

    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    S: np.ndarray
    J: np.ndarray
    dp_var: np.ndarray
    dense: Callable[[float], np.ndarray]
    phi: Optional[np.ndarray] = None
    t_events: Optional[list] = None

    def state(self, t: float):
        """t 时刻的 (x, p)"""
        y = self.dense(t)
        return float(y[0]), float(y[1])

    def energy_drift(self, field: HamiltonianField) -> float:
        energies = np.array([field.value(p, x) for p, x in zip(self.p, self.x)])
        return float(np.abs(energies - energies[0]).max())


def _rhs(field: HamiltonianField):
    def rhs(t, y):
        x, p, _, dx, dp = y
        h_p = field.dp(p, x)
        h_x = field.dx(p, x)
        h_pp, h_px, h_xx = field.second(p, x)
        return [h_p, -h_x, p * h_p - field.value(p, x), h_px * dx + h_pp * dp, -h_xx * dx - h_px * dp]
    return rhs


def integrate_trajectory(field: HamiltonianField, p0: float, x0: float, T: float, d2S0: float = 0.0,
                         times: Optional[Sequence[float]] = None, n_out: int = 201,
                         rtol: float = RTOL, atol: float = ATOL, events=None) -> Trajectory:
    """积分哈密顿轨道及其作用量与Jacobian

    Args:
        field: 哈密顿场
        p0, x0: 初始动量与位置
        T: 终止时刻（> 0）
        d2S0: 初始相位的二阶导数 S₀''(x₀)，决定 δp(0)
        times: 输出时刻；默认在 [0, T] 上均匀取 n_out 个
        rtol, atol: 积分容差（DOP853）
        events: 透传给 solve_ivp 的事件函数

    Returns:
        Trajectory
    """
    if not T > 0:
        raise TrajectoryError(f"积分时长 T = {T} 必须为正", "INVALID_TIME")
    t_eval = np.linspace(0.0, T, n_out) if times is None else np.asarray(times, dtype=float)
    sol = solve_ivp(_rhs(field), (0.0, T), [x0, p0, 0.0, 1.0, d2S0], method="DOP853", t_eval=t_eval,
                    rtol=rtol, atol=atol, dense_output=True, events=events)
    if sol.status == -1:
        raise TrajectoryError(f"轨道积分失败（步长下溢）: {sol.message}", "STEP_UNDERFLOW", x0=x0, p0=p0)
    if not np.all(np.isfinite(sol.y)):
        raise TrajectoryError("轨道积分出现非有限值", "NONFINITE_STATE", x0=x0, p0=p0)
    x, p, S, J, dp = sol.y
    return Trajectory(t=sol.t, x=x, p=p, S=S, J=J, dp_var=dp, dense=sol.sol,
                      t_events=sol.t_events if events is not None else None)


@dataclass(frozen=True, eq=False)
class TrajectoryFan:
    """从初始流形 {(x₀, S₀'(x₀))} 出发的轨道族

    各数组形状为 (n_t, n_0)。S 含初值 S₀(x₀)，phi 为输运后的振幅。
    """

    times: np.ndarray
    x0: np.ndarray
    X: np.ndarray
    P: np.ndarray
    S: np.ndarray
    J: np.ndarray
    phi: np.ndarray

    def time_index(self, t: float) -> int:
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > 1e-9 * max(1.0, abs(t)):
            raise TrajectoryError(f"t = {t} 不是轨道族的采样时刻", "TIME_NOT_SAMPLED")
        return k


def _derivative(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    return (np.asarray(func(x + step)) - np.asarray(func(x - step))) / (2.0 * step)


def launch_fan(field: HamiltonianField, x0_values: Sequence[float], S0: Callable, phi0: Callable,
               times: Sequence[float], dS0: Optional[Callable] = None, d2S0: Optional[Callable] = None,
               max_workers: int = 1) -> TrajectoryFan:
    """构造WKB初值 e^{iS₀/h}φ₀ 的轨道族

    Args:
        field: 哈密顿场（若带生成元则沿轨道做输运）
        x0_values: 初始点
        S0, phi0: 初始相位与振幅（向量化函数）
        times: 输出时刻，须含 0
        dS0, d2S0: 相位的一阶、二阶导数；缺省时差分
        max_workers: 并行线程数

    Returns:
        TrajectoryFan
    """
    from .transport import transport_solve

    logger = create_logger_with_context({'component': 'semiclassics', 'operation': 'launch_fan'})
    x0 = np.asarray(x0_values, dtype=float)
    times = np.asarray(times, dtype=float)
    p0 = np.asarray(dS0(x0) if dS0 is not None else _derivative(S0, x0), dtype=float)
    s2 = np.asarray(d2S0(x0) if d2S0 is not None else _derivative(lambda z: _derivative(S0, z), x0), dtype=float)
    s2 = np.broadcast_to(s2, x0.shape)
    amplitude = np.asarray(phi0(x0), dtype=complex)
    T = float(times[-1])

    def run(k):
        traj = integrate_trajectory(field, p0[k], x0[k], T, d2S0=s2[k], times=times)
        factor = np.ones(len(times), dtype=complex)
        if field.generator is not None:
            factor = transport_solve(field, traj, np.array([1.0 + 0j])).phi[:, 0]
        return traj, factor

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run, range(len(x0))))
    else:
        results = [run(k) for k in range(len(x0))]

    X = np.stack([r[0].x for r in results], axis=1)
    P = np.stack([r[0].p for r in results], axis=1)
    S = np.stack([r[0].S for r in results], axis=1) + np.asarray(S0(x0), dtype=float)[None, :]
    J = np.stack([r[0].J for r in results], axis=1)
    phi = np.stack([r[1] for r in results], axis=1) * amplitude[None, :]
    logger.info(f"✅ 轨道族积分完成: {len(x0)} 条轨道, {len(times)} 个时刻")
    return TrajectoryFan(times=times, x0=x0, X=X, P=P, S=S, J=J, phi=phi)


def wkb_evaluate(fan: TrajectoryFan, t: float, x_query: Sequence[float], h: float,
                 J_tol: float = J_TOL) -> np.ndarray:
    """无焦散WKB波列 ψ(x, t) = e^{iS/h}·φ/√J，x₀ = X₀(x, t)

    Args:
        fan: 轨道族
        t: 时刻（须为采样时刻）
        x_query: 查询点
        h: 半经典参数
        J_tol: Jacobian 下限

    Returns:
        复数组；输运后的支撑之外为 0
    """
    k = fan.time_index(t)
    J = fan.J[k]
    if J.min() < J_tol:
        raise CausticEncountered(f"t = {t:.6g} 处 min J = {J.min():.3e} < {J_tol:.1e}", t=t,
                                 min_jacobian=float(J.min()))
    X = fan.X[k]
    if not np.all(np.diff(X) > 0):
        raise CausticEncountered(f"t = {t:.6g} 处 x = ξ(x₀, t) 不单调", t=t, min_jacobian=float(J.min()))

    x_query = np.asarray(x_query, dtype=float)
    inside = (x_query >= X[0]) & (x_query <= X[-1])
    x0_of_x = PchipInterpolator(X, fan.x0)(x_query[inside])

    S = CubicSpline(fan.x0, fan.S[k])(x0_of_x)
    Jq = CubicSpline(fan.x0, J)(x0_of_x)
    phi = CubicSpline(fan.x0, fan.phi[k].real)(x0_of_x) + 1j * CubicSpline(fan.x0, fan.phi[k].imag)(x0_of_x)

    psi = np.zeros(len(x_query), dtype=complex)
    psi[inside] = np.exp(1j * S / h) * phi / np.sqrt(Jq)
    return psi
