"""
Bloch有效哈密顿量、零阶缠绕函数与算子族

快尺度横向算子 H₀ = (p − iU∂_y)² + v(y, x)，∂pH₀ = 2(p − iU∂_y)，H₁ = −U'(x)∂_y。
χ₀(y) = Σ_n b_n e^{iny} 为 H₀ 在 P = p/U 处第 ν 个本征函数。
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..log import create_logger_with_context
from ..reduction import OperatorFamily
from ..utils import UniformGrid, finite_difference, stencil_weights, trapezoid_weights
from .bands import DEFAULT_N_PW, BlochBand, bloch_bands_fourier
from .potential import PeriodicPotential, quasimomentum

DEFAULT_NY = 128
DEFAULT_DP = 1e-4
X_STENCIL_WIDTH = 9


def effective_hamiltonian_bloch(band: BlochBand, p: float, x: float, U: float) -> float:
    """H_eff^ν(p, x) = ℰ^ν(P, x) + p² − (UP)²，P = p/U"""
    P = quasimomentum(p, x, U)
    return band.dispersion(P, x) + p * p - (U * P) ** 2


def periodic_y_grid(ny: int) -> np.ndarray:
    """一个快周期 [0, 2π) 上的 ny 个等距节点"""
    return 2.0 * np.pi * np.arange(ny) / ny


def _synthesize(coeffs: np.ndarray, ny: int) -> np.ndarray:
    n_pw = (len(coeffs) - 1) // 2
    n = np.arange(-n_pw, n_pw + 1)
    return np.exp(1j * np.outer(periodic_y_grid(ny), n)) @ coeffs


def chi0_bloch(pot: PeriodicPotential, nu: int, p: float, x: float, ny: int = DEFAULT_NY,
               n_pw: int = DEFAULT_N_PW) -> np.ndarray:
    """χ₀ 在一个快周期上的采样，梯形求积归一；相位使最大的Fourier分量为正实数"""
    P = quasimomentum(p, x, pot)
    _, vecs = bloch_bands_fourier(pot, x, P, nu, n_pw, check=False, vectors=True)
    b = vecs[nu - 1]
    lead = int(np.argmax(np.abs(b)))
    b = b * np.exp(-1j * np.angle(b[lead]))
    chi = _synthesize(b, ny)
    weights = trapezoid_weights(ny, 2.0 * np.pi / ny, periodic=True)
    return chi / np.sqrt(np.sum(weights * np.abs(chi) ** 2))


def bloch_family(pot: PeriodicPotential, ny: int = DEFAULT_NY) -> OperatorFamily:
    """Bloch问题的算子族，H₀ 以FFT谱方法作用"""
    modes = np.fft.fftfreq(ny, d=1.0 / ny)
    y = periodic_y_grid(ny)

    def apply_H0(p, x, values):
        values = np.asarray(values, dtype=complex)
        kinetic = np.fft.ifft((p + pot.U_at(x) * modes) ** 2 * np.fft.fft(values))
        return kinetic + pot.sample(y, x) * values

    def apply_dH0_dp(p, x, values):
        return np.fft.ifft(2.0 * (p + pot.U_at(x) * modes) * np.fft.fft(np.asarray(values, dtype=complex)))

    def apply_H1(p, x, values):
        return -pot.dU_at(x) * np.fft.ifft(1j * modes * np.fft.fft(np.asarray(values, dtype=complex)))

    return OperatorFamily(
        apply_H0=apply_H0,
        apply_dH0_dp=apply_dH0_dp,
        apply_H1=apply_H1,
        weights=trapezoid_weights(ny, 2.0 * np.pi / ny, periodic=True),
        active=lambda x: np.ones(ny, dtype=bool),
    )


@dataclass(eq=False)
class BlochEffectiveHamiltonian:
    """节点上精确求值的 Bloch H_eff，供一阶修正使用

    一维标量相位下 UP = p，H_eff = ℰ^ν(p/U(x), x)。
    """

    pot: PeriodicPotential
    nu: int
    band: Optional[BlochBand] = None
    n_pw: int = DEFAULT_N_PW
    dp_step: float = DEFAULT_DP
    _rows: Dict[float, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    @property
    def x_grid(self) -> UniformGrid:
        return self.pot.x_grid

    def _energy(self, p: float, i: int) -> float:
        x = float(self.x_grid.points[i])
        P = quasimomentum(p, x, self.pot)
        return float(bloch_bands_fourier(self.pot, x, P, self.nu, self.n_pw, check=False)[self.nu - 1])

    def _row(self, p: float) -> np.ndarray:
        key = float(p)
        if key not in self._rows:
            self._rows[key] = np.array([self._energy(p, i) for i in range(self.x_grid.n)])
        return self._rows[key]

    def __call__(self, p: float, x: float) -> float:
        if self.band is not None:
            return effective_hamiltonian_bloch(self.band, p, x, self.pot.U_at(x))
        return float(np.interp(x, self.x_grid.points, self._row(p)))

    def at_node(self, p: float, i: int) -> float:
        return float(self._row(p)[i])

    def dp(self, p: float, i: int) -> float:
        d = self.dp_step
        return (self._energy(p + d, i) - self._energy(p - d, i)) / (2.0 * d)

    def dx(self, p: float, i: int) -> float:
        return float(finite_difference(self._row(p), self.x_grid.step)[i])


@dataclass(eq=False)
class BlochTerm:
    """Bloch项源：χ₀ 及其 p、x 导数

    相邻采样的相位按平行输运对齐到中心点（重叠为正实数）后做 x 向九点差分（端点单侧）与 p 向中心差分。
    """

    pot: PeriodicPotential
    nu: int
    ny: int = DEFAULT_NY
    n_pw: int = DEFAULT_N_PW
    dp_step: float = DEFAULT_DP
    _cache: Dict[Tuple[float, int], np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self._weights = trapezoid_weights(self.ny, 2.0 * np.pi / self.ny, periodic=True)
        self.logger = create_logger_with_context({'component': 'bloch', 'nu': self.nu})

    @property
    def x_grid(self) -> UniformGrid:
        return self.pot.x_grid

    def _raw(self, p: float, i: int) -> np.ndarray:
        key = (float(p), i)
        if key not in self._cache:
            x = float(self.x_grid.points[i])
            self._cache[key] = chi0_bloch(self.pot, self.nu, p, x, self.ny, self.n_pw)
        return self._cache[key]

    def _aligned(self, reference: np.ndarray, p: float, i: int) -> np.ndarray:
        chi = self._raw(p, i)
        overlap = np.sum(self._weights * np.conj(reference) * chi)
        return chi * np.exp(-1j * np.angle(overlap))

    def chi0(self, p: float, i: int) -> np.ndarray:
        return self._raw(p, i)

    def dchi0_dp(self, p: float, i: int) -> np.ndarray:
        center = self._raw(p, i)
        d = self.dp_step
        return (self._aligned(center, p + d, i) - self._aligned(center, p - d, i)) / (2.0 * d)

    def dchi0_dx(self, p: float, i: int) -> np.ndarray:
        n, step = self.x_grid.n, self.x_grid.step
        width = min(X_STENCIL_WIDTH, n)
        start = min(max(i - width // 2, 0), n - width)
        weights = stencil_weights(tuple(range(start - i, start - i + width)), 1)
        center = self._raw(p, i)
        total = np.zeros(self.ny, dtype=complex)
        for j, c in zip(range(start, start + width), weights):
            total += c * (center if j == i else self._aligned(center, p, j))
        return total / step
