"""
Bloch能带：平面波方法与传递矩阵判别式

快尺度方程 −u_ξξ + v(Uξ, x)u = ℰu，Bloch条件 u(ξ + 2π/U) = e^{2πiP}u(ξ)。
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.linalg import eigh, toeplitz
from scipy.optimize import brentq, minimize_scalar

from ..exceptions import BlochError, StickingBands, TruncationError
from ..log import create_logger_with_context
from ..utils import UniformGrid
from .potential import PeriodicPotential

DEFAULT_N_PW = 16
SENSITIVITY_TOL = 1e-8
DEFAULT_P_NODES = 65


def bloch_matrix(vhat: np.ndarray, U: float, P: float, n_pw: int) -> np.ndarray:
    """平面波基 e^{i(P+n)Uξ}（|n| ≤ n_pw）下的厄米矩阵"""
    n_f = (len(vhat) - 1) // 2
    size = 2 * n_pw + 1
    column = np.zeros(size, dtype=complex)
    row = np.zeros(size, dtype=complex)
    m = min(n_f, size - 1)
    column[:m + 1] = vhat[n_f:n_f + m + 1]
    row[:m + 1] = vhat[n_f::-1][:m + 1]
    matrix = toeplitz(column, row)
    n = np.arange(-n_pw, n_pw + 1)
    matrix[np.diag_indices(size)] += (U * (P + n)) ** 2
    return matrix


def bloch_bands_fourier(pot: PeriodicPotential, x: float, P: float, K: int, n_pw: int = DEFAULT_N_PW,
                        check: bool = True, vectors: bool = False):
    """最低 K 个Bloch能量

    Args:
        pot: 周期势
        x: 纵向坐标
        P: 准动量
        K: 能带数
        n_pw: 平面波截断阶
        check: 是否做截断灵敏度检查（n_pw 加倍后第K带移动需 < 1e-8）
        vectors: 是否同时返回系数向量

    Returns:
        升序本征值；vectors=True 时返回 (本征值, 形状 (K, 2n_pw+1) 的系数)
    """
    if 2 * n_pw + 1 < K + 2:
        raise TruncationError(f"平面波截断 n_pw = {n_pw} 不足以求 {K} 条能带")
    vhat, U = pot.vhat(x), pot.U_at(x)
    values, vecs = eigh(bloch_matrix(vhat, U, P, n_pw), subset_by_index=[0, K - 1])
    if check:
        refined = eigh(bloch_matrix(vhat, U, P, 2 * n_pw), subset_by_index=[0, K - 1], eigvals_only=True)
        shift = float(np.abs(refined - values).max())
        if shift > SENSITIVITY_TOL * max(1.0, abs(values[-1])):
            raise TruncationError(f"n_pw = {n_pw} 时第 {K} 带对截断敏感（变化 {shift:.3e}）", shift=shift)
    if vectors:
        return values, vecs.T
    return values


def fourier_band_edges(pot: PeriodicPotential, x: float, n_bands: int, n_pw: int = DEFAULT_N_PW) -> np.ndarray:
    """由 P ∈ {0, 1/2} 处的能量得到带边，形状 (n_bands, 2)"""
    at_zero = bloch_bands_fourier(pot, x, 0.0, n_bands, n_pw)
    at_half = bloch_bands_fourier(pot, x, 0.5, n_bands, n_pw)
    return np.stack([np.minimum(at_zero, at_half), np.maximum(at_zero, at_half)], axis=1)


def bloch_discriminant_oracle(pot: PeriodicPotential, x: float, energy: float,
                              rtol: float = 1e-12, atol: float = 1e-14) -> float:
    """单周期传递矩阵的迹 tr M(ℰ)

    ℰ 落在准动量为 P 的能带上当且仅当 tr M = 2cos(2πP)。
    """
    if not pot.is_real:
        raise BlochError("判别式方法要求实周期势", "COMPLEX_POTENTIAL")
    vhat, U = pot.vhat(x), pot.U_at(x)
    n_f = pot.n_fourier
    modes = np.arange(1, n_f + 1)
    v0 = vhat[n_f].real
    positive = vhat[n_f + 1:]

    def v(xi):
        return v0 + 2.0 * np.sum((positive * np.exp(1j * modes * U * xi)).real)

    def rhs(xi, state):
        q = v(xi) - energy
        return [state[1], q * state[0], state[3], q * state[2]]

    period = 2.0 * np.pi / U
    sol = solve_ivp(rhs, (0.0, period), [1.0, 0.0, 0.0, 1.0], method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise BlochError(f"判别式积分失败: {sol.message}", "INTEGRATION_FAILED", energy=energy)
    return float(sol.y[0, -1] + sol.y[3, -1])


def discriminant_band_edges(pot: PeriodicPotential, x: float, n_bands: int, n_scan: int = 400,
                            e_max: Optional[float] = None) -> np.ndarray:
    """判别式 tr M = ±2 的根给出的带边，形状 (n_bands, 2)

    扫描能量网格找变号，并在判别式极值附近细化以捕捉窄能隙。
    """
    U = pot.U_at(x)
    y = np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False)
    v = pot.sample(y, x)
    e_lo = float(v.min()) - 1e-3 * max(1.0, abs(float(v.min())))
    if e_max is None:
        e_max = float(v.max()) + (U * (n_bands + 1) / 2.0) ** 2 * 1.2 + 1.0
    energies = np.linspace(e_lo, e_max, n_scan)

    def disc(e):
        return bloch_discriminant_oracle(pot, x, e)

    values = np.array([disc(e) for e in energies])
    roots = []
    for target in (2.0, -2.0):
        g = values - target
        for k in range(n_scan - 1):
            if g[k] == 0.0:
                roots.append(energies[k])
            elif g[k] * g[k + 1] < 0:
                roots.append(brentq(lambda e: disc(e) - target, energies[k], energies[k + 1], xtol=1e-14))
        for k in range(1, n_scan - 1):
            is_max = values[k] >= values[k - 1] and values[k] >= values[k + 1]
            is_min = values[k] <= values[k - 1] and values[k] <= values[k + 1]
            if not (is_max or is_min) or not (np.sign(g[k - 1]) == np.sign(g[k]) == np.sign(g[k + 1])):
                continue
            sign = -1.0 if is_max else 1.0
            res = minimize_scalar(lambda e: sign * disc(e), bounds=(energies[k - 1], energies[k + 1]),
                                  method="bounded", options={"xatol": 1e-13})
            extremum = disc(res.x) - target
            if extremum * g[k] < 0:
                roots.append(brentq(lambda e: disc(e) - target, energies[k - 1], res.x, xtol=1e-14))
                roots.append(brentq(lambda e: disc(e) - target, res.x, energies[k + 1], xtol=1e-14))

    roots = np.unique(np.round(np.sort(roots), 13))
    if len(roots) < 2 * n_bands:
        raise BlochError(f"只找到 {len(roots)} 个带边，少于所需的 {2 * n_bands} 个", "EDGES_NOT_FOUND")
    return roots[:2 * n_bands].reshape(n_bands, 2)


@dataclass(frozen=True, eq=False)
class BlochBand:
    """第 ν 条Bloch能带在 P 网格 × x 网格上的色散

    Attributes:
        nu: 能带编号（从1开始）
        P_grid: [0, 1] 上的准动量节点（含两端）
        x_grid: 纵向网格
        energies: 形状 (nP, nx)
        lower, upper: 带边 E_−^ν(x)、E_+^ν(x)
        gap_below, gap_above: 与相邻能带的最小间隙
    """

    nu: int
    P_grid: np.ndarray
    x_grid: UniformGrid
    energies: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    gap_below: float
    gap_above: float
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self):
        values = np.array(self.energies, dtype=float)
        values[-1] = values[0]
        object.__setattr__(self, "_spline", CubicSpline(self.P_grid, values, axis=0, bc_type="periodic"))

    def _along_x(self, samples: np.ndarray, x) -> np.ndarray:
        return np.interp(x, self.x_grid.points, samples)

    def dispersion(self, P: float, x: float) -> float:
        """ℰ^ν(P, x)：P 方向周期三次样条，x 方向线性插值"""
        return float(self._along_x(self._spline(np.mod(P, 1.0)), x))

    def dispersion_dP(self, P: float, x: float, order: int = 1) -> float:
        return float(self._along_x(self._spline(np.mod(P, 1.0), order), x))

    def bottom(self, i: int) -> Tuple[float, float]:
        """x_i 处带底的 (P, ℰ)"""
        k = int(np.argmin(self.energies[:, i]))
        return float(self.P_grid[k]), float(self.energies[k, i])


def compute_bloch_bands(pot: PeriodicPotential, K: int, n_P: int = DEFAULT_P_NODES, n_pw: int = DEFAULT_N_PW,
                        max_workers: int = 1) -> List[BlochBand]:
    """在 P 网格 × x 网格上计算最低 K 条能带

    每个 x 节点在 P = 1/2 处做一次截断灵敏度检查；多算一条带用于上方间隙。
    """
    logger = create_logger_with_context({'component': 'bloch', 'K': K})
    if (n_P - 1) % 2:
        raise BlochError("P 网格节点数须为奇数以包含 P = 1/2", "INVALID_P_GRID")
    P_grid = np.linspace(0.0, 1.0, n_P)
    levels = K + 1

    def solve_column(x):
        bloch_bands_fourier(pot, x, 0.5, levels, n_pw, check=True)
        return np.stack([bloch_bands_fourier(pot, x, P, levels, n_pw, check=False) for P in P_grid])

    xs = pot.x_grid.points
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            columns = list(pool.map(solve_column, xs))
    else:
        columns = [solve_column(x) for x in xs]
    table = np.stack(columns, axis=1)  # (nP, nx, levels)

    gaps = np.diff(table, axis=2).min(axis=(0, 1))
    bands = []
    for k in range(K):
        energies = table[:, :, k]
        bands.append(BlochBand(
            nu=k + 1, P_grid=P_grid, x_grid=pot.x_grid, energies=energies,
            lower=energies.min(axis=0), upper=energies.max(axis=0),
            gap_below=float(gaps[k - 1]) if k > 0 else np.inf, gap_above=float(gaps[k])))
    logger.info(f"✅ 能带计算完成: {K} 条, P 节点 {n_P}, x 节点 {pot.x_grid.n}")
    return bands


def band_gap_check(bands: List[BlochBand], nu: int, gap_tol: float = 1e-3) -> float:
    """第 ν 带与 ν±1 带的最小间隙；低于 gap_tol 时报 StickingBands"""
    by_nu = {band.nu: band for band in bands}
    if nu not in by_nu:
        raise BlochError(f"缺少第 {nu} 带", "BAND_MISSING")
    band = by_nu[nu]
    gaps = []
    for other, stored in ((nu - 1, band.gap_below), (nu + 1, band.gap_above)):
        if other in by_nu:
            gaps.append(float(np.abs(by_nu[other].energies - band.energies).min()))
        elif np.isfinite(stored):
            gaps.append(stored)
    gap = min(gaps) if gaps else np.inf
    if gap < gap_tol:
        raise StickingBands(f"第 {nu} 带与相邻能带粘连，最小间隙 {gap:.3e} < {gap_tol:.1e}", gap=gap, nu=nu)
    return gap


def effective_mass(band: BlochBand, x: float, U: float = 1.0) -> float:
    """带底的有效质量 m* = 2U²/ℰ''(P₀)，使 H_eff ≈ E_− + p²/m*"""
    i = int(np.argmin(np.abs(band.x_grid.points - x)))
    P0, _ = band.bottom(i)
    curvature = band.dispersion_dP(P0, x, order=2)
    if curvature <= 0:
        raise BlochError(f"带底曲率 {curvature:.3e} 非正，有效质量无定义", "NONPOSITIVE_CURVATURE")
    return 2.0 * U * U / curvature

