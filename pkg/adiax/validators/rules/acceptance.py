"""
验收检查规则

每条规则对应一项验收准则：构造固定的小型问题，调用库函数，把测量值写入
ValidationResult.metrics，并在超出容差时记为错误。数值异常同样记为该项失败。
"""

from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from ...bloch import (
    BlochEffectiveHamiltonian,
    PeriodicPotential,
    discriminant_band_edges,
    fourier_band_edges,
)
from ...exceptions import NumericalError
from ...log import create_logger_with_context
from ...reduction import (
    EssentialHamiltonian,
    Regime,
    assemble_essential,
    build_effective_model,
    chi_symbol,
    classify_regime,
    correction_chi1,
    correction_L1,
    effective_hamiltonian,
    geometric_potential,
    hamiltonian_symbol,
    l_symbol,
    solve_reduced_stationary,
    waveguide_family,
)
from ...reference2d import (
    Rect2DGrid,
    Wavefunction2D,
    assemble_2d,
    eigs_2d,
    evolve_cn,
    mode_leakage,
    project_modes,
)
from ...semiclassics import (
    HamiltonianField,
    bohr_sommerfeld,
    integrate_trajectory,
    launch_fan,
    monodromy,
    closed_orbit_period,
    scatter_1d,
    spectral_series,
    transport_solve,
    wkb_evaluate,
)
from ...symbols import fit_slope, reduction_residual
from ...transverse import (
    ConfinementModel,
    Harmonic,
    PowerWell,
    RigidWall,
    sample_potential,
    solve_transverse_at_x,
    solve_window,
    track_branches,
)
from ...utils import UniformGrid, trapezoid_weights
from ..base import ValidationResult, ValidationRule


def _dilation(x):
    return 1.0 + 0.3 * np.exp(-np.asarray(x, dtype=float) ** 2)


def _reduced_physical(model: ConfinementModel, x_grid: UniformGrid, y_grid: UniformGrid, mu: float,
                      v_ext: Callable, count: int):
    """ν = 1 支的约化能级（原能量尺度）与 L₁"""
    branch = track_branches(model, x_grid, y_grid, K=2)[0]
    heff = effective_hamiltonian(branch, v_ext)
    L1 = correction_L1(branch, waveguide_family(model, y_grid), heff)
    essential = assemble_essential(build_effective_model(heff, mu, h=mu, L1=L1))
    return solve_reduced_stationary(essential, count=count).physical, L1


def _full_energies(model: ConfinementModel, x_grid: UniformGrid, y_grid: UniformGrid, mu: float,
                   v_ext: Callable, count: int) -> np.ndarray:
    potential = sample_potential(model, x_grid, y_grid) + np.asarray(v_ext(x_grid.points))[:, None]
    op = assemble_2d(mu, potential, Rect2DGrid(x_grid, y_grid))
    return eigs_2d(op, count).energies


def _centroid(x: np.ndarray, density: np.ndarray) -> float:
    weights = trapezoid_weights(len(x), x[1] - x[0])
    return float(np.sum(weights * x * density) / np.sum(weights * density))


class AcceptanceRule(ValidationRule):
    """验收规则基类；子类实现 check"""

    criterion = 0
    slow = False

    def __init__(self, name: str, description: str):
        super().__init__(name, description)
        self.logger = create_logger_with_context({'component': 'acceptance', 'criterion': self.criterion})

    def validate(self, data: Dict[str, Any]) -> ValidationResult:
        result = ValidationResult()
        try:
            self.check(result)
        except NumericalError as e:
            result.record("error", type(e).__name__)
            result.add_error(f"{type(e).__name__}: {e}")
        if result.is_valid:
            self.logger.info(f"✅ 验收 {self.criterion} 通过: {self.description}")
        else:
            self.logger.error(f"❌ 验收 {self.criterion} 失败: {'; '.join(result.errors)}")
        return result

    def check(self, result: ValidationResult):
        raise NotImplementedError


class ExactSeparationRule(AcceptanceRule):
    """v = cos x + y²：约化能级与二维能级一致，L₁ ≡ 0"""

    criterion = 1

    def __init__(self, mu: float = 0.1, tol: float = 1e-8):
        super().__init__("exact_separation", "可分离势的约化谱与二维谱一致")
        self.mu = mu
        self.tol = tol

    def check(self, result):
        model = Harmonic(omega=np.sqrt(2.0))
        x_grid = UniformGrid(0.0, 2.0 * np.pi, 81)
        y_grid = UniformGrid(-5.0, 5.0, 41)
        reduced, L1 = _reduced_physical(model, x_grid, y_grid, self.mu, np.cos, 3)
        full = _full_energies(model, x_grid, y_grid, self.mu, np.cos, 3)

        relative = float(np.max(np.abs(reduced - full) / np.abs(full)))
        l1_max = max(float(np.abs(L1.values(p)).max()) for p in (-1.0, 0.0, 1.0))
        result.record("reduced", reduced)
        result.record("full", full)
        result.record("relative_difference", relative)
        result.record("max_abs_L1", l1_max)
        result.require(relative <= self.tol, f"约化与二维能级相对差 {relative:.3e} > {self.tol:.0e}")
        result.require(l1_max <= self.tol, f"max|L₁| = {l1_max:.3e} > {self.tol:.0e}")


class AdiabaticOrderRule(AcceptanceRule):
    """软壁波导 (y/D(x))²：μ 减半时基态误差缩小 2.5 到 6 倍"""

    criterion = 2
    slow = True

    def __init__(self, mus: Sequence[float] = (0.2, 0.1), min_ratio: float = 2.5, max_ratio: float = 6.0):
        super().__init__("adiabatic_order", "约化基态误差随 μ 的收敛阶")
        self.mus = tuple(mus)
        self.min_ratio = min_ratio
        self.max_ratio = max_ratio

    def check(self, result):
        model = PowerWell(dilation=_dilation, m=1.0)
        x_grid = UniformGrid(-3.0, 3.0, 121)
        y_grid = UniformGrid(-6.0, 6.0, 61)
        zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
        errors = []
        for mu in self.mus:
            reduced, _ = _reduced_physical(model, x_grid, y_grid, mu, zero, 1)
            full = _full_energies(model, x_grid, y_grid, mu, zero, 1)
            errors.append(abs(float(full[0] - reduced[0])))
        self.judge(result, errors)

    def judge(self, result: ValidationResult, errors: Sequence[float]):
        """两组 μ 的误差比须落在 [min_ratio, max_ratio]"""
        ratio = errors[0] / errors[1] if errors[1] > 0 else np.inf
        result.record("mu", list(self.mus))
        result.record("errors", list(errors))
        result.record("ratio", ratio)
        result.require(ratio >= self.min_ratio, f"误差比 {ratio:.3g} < {self.min_ratio}")
        result.require(ratio <= self.max_ratio, f"误差比 {ratio:.3g} > {self.max_ratio}")


class SymbolOrderRule(AcceptanceRule):
    """约化恒等式残差的 μ 斜率：零阶 ≥ 0.9，一阶修正后 ≥ 1.9"""

    criterion = 3

    def __init__(self, mus: Sequence[float] = (1e-1, 3e-2, 1e-2), leading_min: float = 0.9,
                 corrected_min: float = 1.9):
        super().__init__("symbol_order", "约化恒等式的逐阶残差")
        self.mus = tuple(mus)
        self.leading_min = leading_min
        self.corrected_min = corrected_min

    def check(self, result):
        model = PowerWell(dilation=_dilation, m=1.0)
        x_grid = UniformGrid(-2.0, 2.0, 401)
        y_grid = UniformGrid(-6.0, 6.0, 81)
        branch = track_branches(model, x_grid, y_grid, K=2)[0]
        heff = effective_hamiltonian(branch, 0.0)
        family = waveguide_family(model, y_grid)
        L1 = correction_L1(branch, family, heff)
        chi1 = correction_chi1(branch, family, heff, L1)

        H = hamiltonian_symbol(model, x_grid, y_grid)
        leading = reduction_residual(H, chi_symbol(branch), l_symbol(heff), None, N=2)
        corrected = reduction_residual(H, chi_symbol(branch, chi1), l_symbol(heff, L1), None, N=2)
        slope0 = fit_slope(self.mus, [leading.total(mu) for mu in self.mus])
        slope1 = fit_slope(self.mus, [corrected.total(mu) for mu in self.mus])
        result.record("leading_slope", slope0)
        result.record("corrected_slope", slope1)
        result.record("chi1_solvability", float(chi1.solvability.max()))
        result.require(slope0 >= self.leading_min, f"零阶残差斜率 {slope0:.3f} < {self.leading_min}")
        result.require(slope1 >= self.corrected_min, f"一阶残差斜率 {slope1:.3f} < {self.corrected_min}")


class TransverseAnalyticsRule(AcceptanceRule):
    """刚性壁、谐振子的二阶收敛与软壁伸缩律"""

    criterion = 4

    def __init__(self, order_tol: float = 0.2, scaling_tol: float = 5e-3):
        super().__init__("transverse_analytics", "横向谱的解析检验")
        self.order_tol = order_tol
        self.scaling_tol = scaling_tol

    def _orders(self, model, bounds, sizes, exact) -> np.ndarray:
        errors = np.array([np.abs(solve_transverse_at_x(model, 0.0, UniformGrid(bounds[0], bounds[1], n), 3).eps
                                  - exact) for n in sizes])
        return np.log2(errors[:-1] / errors[1:])

    def check(self, result):
        nu = np.arange(1, 4)
        rigid = self._orders(RigidWall(0.0, 1.0), (0.0, 1.0), (33, 65, 129), nu ** 2 * np.pi ** 2 / 2)
        harmonic = self._orders(Harmonic(omega=1.0), (-8.0, 8.0), (161, 321, 641), nu - 0.5)
        result.record("rigid_wall_orders", rigid)
        result.record("harmonic_orders", harmonic)
        for name, orders in (("刚性壁", rigid), ("谐振子", harmonic)):
            worst = float(np.abs(orders - 2.0).max())
            result.require(worst <= self.order_tol, f"{name} 收敛阶偏离 2 达 {worst:.3f}")

        x_samples = (-1.5, -0.5, 0.0, 0.7, 2.0)
        y_grid = UniformGrid(-5.0, 5.0, 1001)
        spreads = {}
        for m in (1, 2, 4):
            eps = solve_window(PowerWell(dilation=_dilation, m=float(m)), x_samples, y_grid, 2)[:, 0]
            scaled = eps * _dilation(np.array(x_samples)) ** (2.0 * m / (m + 1.0))
            spreads[m] = float(np.ptp(scaled) / np.mean(scaled))
            result.require(spreads[m] <= self.scaling_tol, f"m = {m} 伸缩律偏差 {spreads[m]:.3e}")
        result.record("scaling_spread", spreads)


class BlochCrossMethodRule(AcceptanceRule):
    """Mathieu 势：平面波与判别式带边一致；自由势 H_eff = p²；能隙随幅值线性消失"""

    criterion = 5

    def __init__(self, amplitudes: Sequence[float] = (0.1, 0.5, 1.0), edge_tol: float = 1e-6,
                 free_tol: float = 1e-8, ratio_tol: float = 0.01):
        super().__init__("bloch_cross_method", "Bloch能带的交叉验证")
        self.amplitudes = tuple(amplitudes)
        self.edge_tol = edge_tol
        self.free_tol = free_tol
        self.ratio_tol = ratio_tol

    def check(self, result):
        x_grid = UniformGrid(0.0, 1.0, 3)
        differences = {}
        for a in self.amplitudes:
            pot = PeriodicPotential.mathieu(a, x_grid)
            diff = float(np.abs(fourier_band_edges(pot, 0.0, 3) - discriminant_band_edges(pot, 0.0, 3)).max())
            differences[a] = diff
            result.require(diff <= self.edge_tol, f"a = {a}: 带边差 {diff:.3e} > {self.edge_tol:.0e}")
        result.record("edge_difference", differences)

        free = BlochEffectiveHamiltonian(PeriodicPotential.constant(0.0, x_grid), nu=1)
        momenta = np.linspace(-0.45, 0.45, 19)
        defect = max(abs(free.at_node(p, 1) - p * p) for p in momenta)
        result.record("free_defect", defect)
        result.require(defect <= self.free_tol, f"自由势 H_eff − p² = {defect:.3e}")

        amplitudes = 0.1 / 2.0 ** np.arange(4)
        gaps = []
        for a in amplitudes:
            edges = fourier_band_edges(PeriodicPotential.mathieu(a, x_grid), 0.0, 2)
            gaps.append(float(edges[1, 0] - edges[0, 1]))
        ratios = np.array(gaps[1:]) / np.array(gaps[:-1])
        result.record("gaps", gaps)
        result.record("gap_ratios", ratios)
        result.require(bool(np.all(np.diff(gaps) < 0)), "能隙未随幅值单调减小")
        result.require(bool(np.all(np.abs(ratios - 0.5) <= 0.5 * self.ratio_tol)),
                       f"幅值减半时能隙比 {ratios} 偏离 1/2")


class BohrSommerfeldRule(AcceptanceRule):
    """谐振子精确量子化、四次势对比直接求解、标量 ℒ₁ 的Floquet平移"""

    criterion = 6

    def __init__(self, h: float = 0.05, exact_tol: float = 1e-10, shift_tol: float = 1e-8):
        super().__init__("bohr_sommerfeld", "Bohr–Sommerfeld 谱级数")
        self.h = h
        self.exact_tol = exact_tol
        self.shift_tol = shift_tol

    def check(self, result):
        n = np.arange(6)
        harmonic = bohr_sommerfeld(lambda x: 0.5 * x * x, (-3.0, 3.0), 0.1, n=n)
        exact_defect = float(np.abs(harmonic.energies - 0.1 * (n + 0.5)).max())
        result.record("harmonic_defect", exact_defect)
        result.require(exact_defect <= self.exact_tol, f"谐振子量子化偏差 {exact_defect:.3e}")

        quartic = lambda x: np.asarray(x, dtype=float) ** 4
        levels = bohr_sommerfeld(quartic, (-1.5, 1.5), self.h, n=n)
        x_grid = UniformGrid(-1.5, 1.5, 1501)
        direct = solve_reduced_stationary(EssentialHamiltonian(
            x_grid=x_grid, kinetic=0.5, potential=quartic(x_grid.points), c1=np.zeros(x_grid.n),
            zero_order=0.0, h=self.h, energy_scale=1.0, regime=Regime.SHORT_WAVE), count=len(n)).eigenvalues
        budget = 0.06 * direct / (n + 0.5) ** 2
        result.record("quartic_semiclassical", levels.energies)
        result.record("quartic_direct", direct)
        result.require(bool(np.all(np.abs(levels.energies - direct) <= budget)),
                       f"四次势能级偏差 {np.abs(levels.energies - direct)} 超出 {budget}")

        c = 0.3
        field = HamiltonianField.harmonic(1.0, generator=lambda p, x: c)
        series = spectral_series(field, bohr_sommerfeld(lambda x: 0.5 * x * x, (-3.0, 3.0), 0.1, n=n[:3]))
        shift_defect = max(abs(e.shifted[0] - (e.energy - 0.1 * c)) for e in series.entries)
        result.record("floquet_shift_defect", shift_defect)
        result.require(shift_defect <= self.shift_tol, f"Floquet 平移偏差 {shift_defect:.3e}")


class CurvatureBoundStateRule(AcceptanceRule):
    """曲率 k₀ sech x 的长波本质哈密顿量至少有一个负能级"""

    criterion = 7

    def __init__(self, amplitudes: Sequence[float] = (0.5, 1.0, 2.0), mu: float = 0.01):
        super().__init__("curvature_bound_state", "弯曲波导的几何束缚态")
        self.amplitudes = tuple(amplitudes)
        self.mu = mu

    def check(self, result):
        x_grid = UniformGrid(-120.0, 120.0, 2401)
        y_grid = UniformGrid(0.0, 1.0, 33)
        branch = track_branches(RigidWall(0.0, 1.0), x_grid, y_grid, K=1)[0]
        heff = effective_hamiltonian(branch, 0.0)
        lowest = {}
        for k0 in self.amplitudes:
            k = k0 / np.cosh(x_grid.points)
            model = build_effective_model(heff, self.mu, h=1.0, G=geometric_potential(k))
            essential = assemble_essential(model)
            lowest[k0] = float(solve_reduced_stationary(essential, count=1).eigenvalues[0])
            result.require(lowest[k0] < 0.0, f"k₀ = {k0}: 最低本征值 {lowest[k0]:.3e} ≥ 0")
        result.record("regime", Regime.LONG_WAVE.value)
        result.record("lowest", lowest)


class WkbVersusPdeRule(AcceptanceRule):
    """波包越过低势垒：WKB质心与二维演化第一模式质心一致，模式泄漏 ≤ 10μ²"""

    criterion = 8
    slow = True

    def __init__(self, mu: float = 0.05, t_final: float = 1.0, dt: float = 0.005,
                 centroid_tol: float = 0.05, leakage_factor: float = 10.0):
        super().__init__("wkb_vs_pde", "WKB 与二维 Crank–Nicolson 对照")
        self.mu = mu
        self.t_final = t_final
        self.dt = dt
        self.centroid_tol = centroid_tol
        self.leakage_factor = leakage_factor

    def check(self, result):
        mu = self.mu
        x0, p0, width = -1.0, 1.0, 0.3
        model = Harmonic(omega=lambda x: 1.0 + 0.1 * np.exp(-np.asarray(x, dtype=float) ** 2))
        v_ext = lambda x: 0.1 * np.exp(-np.asarray(x, dtype=float) ** 2)
        x_grid = UniformGrid(-3.0, 2.5, 441)
        y_grid = UniformGrid(-5.0, 5.0, 41)
        branches = track_branches(model, x_grid, y_grid, K=3)
        xs = x_grid.points

        S0 = lambda x: p0 * (np.asarray(x) - x0)
        phi0 = lambda x: np.exp(-(np.asarray(x) - x0) ** 2 / (2.0 * width ** 2))
        field = HamiltonianField.from_samples(xs, v_ext(xs) + branches[0].eps)
        starts = np.linspace(x0 - 5.0 * width, x0 + 5.0 * width, 64)
        fan = launch_fan(field, starts, S0, phi0, [0.0, 0.5 * self.t_final, self.t_final],
                         dS0=lambda x: np.full_like(np.asarray(x, dtype=float), p0),
                         d2S0=lambda x: np.zeros_like(np.asarray(x, dtype=float)))
        wkb_centroid = _centroid(xs, np.abs(wkb_evaluate(fan, self.t_final, xs, mu)) ** 2)

        grid = Rect2DGrid(x_grid, y_grid)
        op = assemble_2d(mu, sample_potential(model, x_grid, y_grid) + v_ext(xs)[:, None], grid)
        values = branches[0].w * (phi0(xs) * np.exp(1j * S0(xs) / mu))[:, None]
        values[0] = values[-1] = 0.0
        psi0 = Wavefunction2D(grid, values).normalized()
        final = evolve_cn(psi0, op, mu, self.dt, int(round(self.t_final / self.dt))).final
        mode1 = project_modes(final, branches[:1])[0]
        pde_centroid = _centroid(xs, np.abs(mode1) ** 2)
        leakage = mode_leakage(final, branches, nu=1)

        travelled = abs(wkb_centroid - x0)
        mismatch = abs(wkb_centroid - pde_centroid)
        result.record("wkb_centroid", wkb_centroid)
        result.record("pde_centroid", pde_centroid)
        result.record("relative_mismatch", mismatch / travelled)
        result.record("leakage", leakage)
        result.require(mismatch <= self.centroid_tol * travelled,
                       f"质心差 {mismatch:.3e} 超过行程 {travelled:.3g} 的 {self.centroid_tol:.0%}")
        result.require(leakage <= self.leakage_factor * mu * mu, f"模式泄漏 {leakage:.3e} > {self.leakage_factor}μ²")


class ScatteringRule(AcceptanceRule):
    """越垒动量公式、反射转向点、μ = 0.01 的区间表"""

    criterion = 9

    def __init__(self, tol: float = 1e-10):
        super().__init__("scattering", "散射渐近与区间分类")
        self.tol = tol

    def check(self, result):
        v = lambda x: 0.5 / np.cosh(np.asarray(x, dtype=float)) ** 2 + 0.1 * np.tanh(x)
        x_range = (-8.0, 8.0)
        offsets = (0.0, 0.05)
        v_minus, v_plus = float(v(x_range[0])), float(v(x_range[1]))

        above = scatter_1d(v, x_range, 0.9, 0.05, offsets=offsets)
        expected = (np.sqrt(2.0 * (0.9 - v_minus - offsets[0])), np.sqrt(2.0 * (0.9 - v_plus - offsets[1])))
        momentum_defect = max(abs(above.p_minus - expected[0]), abs(above.p_plus - expected[1]))
        result.record("momentum_defect", momentum_defect)
        result.require(above.transmitted, "E = 0.9 应越过势垒")
        result.require(momentum_defect <= self.tol, f"渐近动量偏差 {momentum_defect:.3e}")

        below = scatter_1d(v, x_range, 0.3, 0.05)
        fine = np.linspace(x_range[0], x_range[1], 200001)
        j = int(np.nonzero(v(fine) >= 0.3)[0][0])
        reference = bisect(lambda z: float(v(z)) - 0.3, fine[j - 1], fine[j], xtol=1e-15)
        turning_defect = abs(below.x_f - reference)
        result.record("turning_point_defect", turning_defect)
        result.require(not below.transmitted, "E = 0.3 应被反射")
        result.require(turning_defect <= self.tol, f"转向点偏差 {turning_defect:.3e}")

        expected_tags = {0.01: Regime.SHORT_WAVE, 0.1: Regime.MEDIUM_WAVE, 1.0: Regime.LONG_WAVE,
                         0.003: Regime.ULTRA_SHORT_WAVE}
        tags = {h: classify_regime(0.01, h).value for h in expected_tags}
        result.record("regimes", tags)
        result.require(all(tags[h] == tag.value for h, tag in expected_tags.items()), f"区间表不符: {tags}")


class ConservationRule(AcceptanceRule):
    """能量、范数与单值矩阵的守恒性"""

    criterion = 10

    def __init__(self, tol: float = 1e-9):
        super().__init__("conservation", "守恒与幺正性")
        self.tol = tol

    def check(self, result):
        anharmonic = HamiltonianField.from_potential(lambda x: 0.5 * x * x + 0.25 * x ** 4,
                                                     lambda x: x + x ** 3)
        drift = integrate_trajectory(anharmonic, 1.0, 0.0, 10.0).energy_drift(anharmonic)
        result.record("energy_drift", drift)
        result.require(drift <= self.tol, f"轨道能量漂移 {drift:.3e}")

        grid = Rect2DGrid.from_bounds((-1.0, 1.0), 32, (-1.0, 1.0), 32)
        op = assemble_2d(0.5, lambda x, y: 0.5 * (x * x + y * y), grid)
        psi = Wavefunction2D.from_function(grid, lambda x, y: np.exp(-8.0 * ((x - 0.2) ** 2 + y ** 2) + 3j * x))
        cn_drift = evolve_cn(psi.normalized(), op, 0.5, 1e-3, 1000).norm_drift
        result.record("cn_norm_drift", cn_drift)
        result.require(cn_drift <= self.tol, f"Crank–Nicolson 范数漂移 {cn_drift:.3e}")

        hermitian = lambda p, x: np.array([[x, 0.2 + 0.1j * p], [0.2 - 0.1j * p, -x]])
        field = HamiltonianField.harmonic(1.0, generator=hermitian)
        transport = transport_solve(field, integrate_trajectory(field, 1.0, 0.0, 10.0),
                                    np.array([1.0, 0.0], dtype=complex))
        result.record("transport_norm_drift", transport.norm_drift)
        result.require(transport.norm_drift <= self.tol, f"输运范数漂移 {transport.norm_drift:.3e}")

        p0, period = closed_orbit_period(field, 0.5, 0.0)
        multipliers = np.linalg.eigvals(monodromy(field, p0, 0.0, period))
        imaginary = float(np.abs(np.log(np.abs(multipliers))).max() / period)
        result.record("floquet_imaginary", imaginary)
        result.require(imaginary <= self.tol, f"Floquet 指数虚部 {imaginary:.3e}")


ACCEPTANCE_RULES = (
    ExactSeparationRule,
    AdiabaticOrderRule,
    SymbolOrderRule,
    TransverseAnalyticsRule,
    BlochCrossMethodRule,
    BohrSommerfeldRule,
    CurvatureBoundStateRule,
    WkbVersusPdeRule,
    ScatteringRule,
    ConservationRule,
)


def create_acceptance_rules(criteria: Optional[Sequence[int]] = None,
                            include_slow: bool = False) -> List[AcceptanceRule]:
    """按编号创建验收规则；耗时规则仅在 include_slow 时加入"""
    wanted = set(criteria) if criteria else {cls.criterion for cls in ACCEPTANCE_RULES}
    return [cls() for cls in ACCEPTANCE_RULES
            if cls.criterion in wanted and (include_slow or not cls.slow)]
