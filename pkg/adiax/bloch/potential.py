"""
快振荡周期势

v(y, x) = Σ_n v̂_n(x) e^{iny}，快变量 y = Φ(x)/μ，相位导数 U(x) = Φ'(x) > 0。
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ..exceptions import BlochError
from ..transverse import as_profile
from ..utils import UniformGrid, finite_difference

Profile = Union[float, Callable[[np.ndarray], np.ndarray]]

U_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class PeriodicPotential:
    """Fourier系数沿x网格采样的周期势

    Attributes:
        x_grid: 纵向网格
        coeffs: 形状 (nx, 2N_F+1)，第 n + N_F 列为 v̂_n
        U: 相位导数 Φ'(x)
        dU: Φ''(x)
    """

    x_grid: UniformGrid
    coeffs: np.ndarray
    U: np.ndarray
    dU: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
        if coeffs.shape[0] != self.x_grid.n or coeffs.shape[1] % 2 != 1:
            raise BlochError(f"Fourier系数形状 {coeffs.shape} 与x网格 {self.x_grid.n} 不一致", "GRID_MISMATCH")
        if not np.all(np.isfinite(coeffs)):
            raise BlochError("Fourier系数含有非有限值", "NONFINITE_POTENTIAL")
        U = np.asarray(self.U, dtype=float)
        if U.shape != (self.x_grid.n,) or np.any(U <= U_FLOOR):
            raise BlochError("相位导数 U(x) 必须处处为正", "U_NOT_POSITIVE")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "dU", np.asarray(self.dU, dtype=float))

    @property
    def n_fourier(self) -> int:
        return (self.coeffs.shape[1] - 1) // 2

    @property
    def is_real(self) -> bool:
        return bool(np.allclose(self.coeffs, np.conj(self.coeffs[:, ::-1]), rtol=0, atol=1e-12))

    def _interp(self, values: np.ndarray, x: float) -> np.ndarray:
        xs = self.x_grid.points
        if x < xs[0] - 1e-12 or x > xs[-1] + 1e-12:
            raise BlochError(f"x = {x} 超出势的采样范围 [{xs[0]}, {xs[-1]}]", "X_OUT_OF_RANGE")
        t = np.clip((x - xs[0]) / self.x_grid.step, 0.0, self.x_grid.n - 1)
        i = min(int(np.floor(t)), self.x_grid.n - 2)
        frac = t - i
        return (1.0 - frac) * values[i] + frac * values[i + 1]

    def vhat(self, x: float) -> np.ndarray:
        return self._interp(self.coeffs, float(x))

    def U_at(self, x: float) -> float:
        return float(self._interp(self.U, float(x)))

    def dU_at(self, x: float) -> float:
        return float(self._interp(self.dU, float(x)))

    def sample(self, y: np.ndarray, x: float) -> np.ndarray:
        """在快变量 y 上求值；实势返回实数组"""
        n = np.arange(-self.n_fourier, self.n_fourier + 1)
        values = np.exp(1j * np.outer(np.asarray(y, float), n)) @ self.vhat(x)
        return values.real if self.is_real else values

    @classmethod
    def from_coefficients(cls, x_grid: UniformGrid, coeffs: np.ndarray, U: Profile = 1.0) -> 'PeriodicPotential':
        u = as_profile(U)(x_grid.points)
        return cls(x_grid, np.tile(coeffs, (x_grid.n, 1)) if np.ndim(coeffs) == 1 else coeffs, u,
                   finite_difference(u, x_grid.step))

    @classmethod
    def mathieu(cls, a: float, x_grid: UniformGrid, U: Profile = 1.0) -> 'PeriodicPotential':
        """v = 2a·cos y，v̂_{±1} = a"""
        return cls.from_coefficients(x_grid, np.array([a, 0.0, a], dtype=complex), U)

    @classmethod
    def constant(cls, c: float, x_grid: UniformGrid, U: Profile = 1.0) -> 'PeriodicPotential':
        return cls.from_coefficients(x_grid, np.array([c], dtype=complex), U)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray, float], np.ndarray], x_grid: UniformGrid,
                      U: Profile = 1.0, n_fourier: int = 8, n_samples: int = 64) -> 'PeriodicPotential':
        """对 y ↦ func(y, x) 做FFT截取 |n| ≤ n_fourier 的系数"""
        if n_samples <= 2 * n_fourier:
            raise BlochError("采样点数不足以分辨所需的Fourier阶", "FOURIER_UNDERSAMPLED")
        y = 2.0 * np.pi * np.arange(n_samples) / n_samples
        coeffs = np.empty((x_grid.n, 2 * n_fourier + 1), dtype=complex)
        for i, x in enumerate(x_grid.points):
            spectrum = np.fft.fft(np.asarray(func(y, x), dtype=complex)) / n_samples
            coeffs[i] = spectrum[np.arange(-n_fourier, n_fourier + 1)]
        return cls.from_coefficients(x_grid, coeffs, U)


def quasimomentum(p, x, U):
    """P = p/U(x)

    Args:
        p: 纵向动量
        x: 纵向坐标
        U: 常数、x 的函数或 PeriodicPotential
    """
    if isinstance(U, PeriodicPotential):
        u = U.U_at(x)
    elif callable(U):
        u = U(x)
    else:
        u = U
    u = np.asarray(u, dtype=float)
    if np.any(u == 0):
        raise BlochError("相位导数 U = 0，准动量无定义", "U_NOT_POSITIVE")
    P = np.asarray(p, dtype=float) / u
    return float(P) if P.ndim == 0 else P
