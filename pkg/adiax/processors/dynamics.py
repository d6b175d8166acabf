"""
动力学命令：scatter、propagate
"""

from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..factory import ModelFactory
from ..reference2d import Rect2DGrid, Wavefunction2D, assemble_2d, evolve_cn, mode_leakage
from ..semiclassics import launch_fan, scatter_1d, wkb_evaluate
from ..transverse import sample_potential
from ..utils import trapezoid_weights
from .base import BaseProcessor, potential_field

# 初始点覆盖波包中心两侧的宽度倍数
PACKET_SPAN = 5.0
DEFAULT_TRAJECTORIES = 64
DEFAULT_QUERY = 201


def energy_values(entry: Any) -> np.ndarray:
    """能量列表或 {start, stop, n} 扫描"""
    if isinstance(entry, dict):
        return np.linspace(float(entry['start']), float(entry['stop']), int(entry['n']))
    return np.asarray(entry, dtype=float)


def packet_data(packet: Dict[str, Any]) -> Tuple[Callable, Callable, Callable, Callable]:
    """归一化高斯波包的 (S₀, φ₀, S₀′, S₀″)

    φ₀ = (w√π)^{-1/2}·exp(−(x−x₀)²/2w²)，S₀ = p₀(x−x₀) − focus·(x−x₀)²/2。
    """
    x0, p0, width = float(packet['x0']), float(packet['p0']), float(packet['width'])
    focus = float(packet.get('focus', 0.0))
    norm = (width * np.sqrt(np.pi)) ** -0.5

    def S0(x):
        d = np.asarray(x, dtype=float) - x0
        return p0 * d - 0.5 * focus * d * d

    def phi0(x):
        d = np.asarray(x, dtype=float) - x0
        return norm * np.exp(-d * d / (2.0 * width * width))

    def dS0(x):
        return p0 - focus * (np.asarray(x, dtype=float) - x0)

    def d2S0(x):
        return np.full_like(np.asarray(x, dtype=float), -focus)

    return S0, phi0, dS0, d2S0


def centroid(x: np.ndarray, density: np.ndarray) -> float:
    w = trapezoid_weights(len(x), float(x[1] - x[0])) * density
    return float(np.sum(w * x) / np.sum(w))


class ScatterProcessor(BaseProcessor):
    """能量扫描：越垒或反射、渐近动量与转向点"""

    command = "scatter"

    def execute(self) -> Dict[str, Any]:
        section = self.config['scatter']
        nu = section.get('nu', 1)
        potential, x_grid, h = self.effective_potential(nu)
        offsets = tuple(float(v) for v in section.get('offsets', (0.0, 0.0)))

        rows = []
        for E in energy_values(section['energies']):
            asymptotics = scatter_1d(potential, (x_grid.start, x_grid.stop), float(E), h, offsets=offsets)
            rows.append(asymptotics.as_row())
        self.write_table('scatter.csv', ['E', 'outcome', 'p_minus', 'p_plus', 'x_f'],
                         ([r['E'], r['outcome'], r['p_minus'], r['p_plus'], r['x_f']] for r in rows))

        transmitted = sum(1 for r in rows if r['outcome'] == 'Transmitted')
        self.logger.info(f"📊 {len(rows)} 个能量: {transmitted} 越垒, {len(rows) - transmitted} 反射")
        return {'nu': nu, 'h': h, 'transmitted': transmitted, 'reflected': len(rows) - transmitted}


class PropagateProcessor(BaseProcessor):
    """WKB 波列与/或二维 Crank–Nicolson 演化的 |ψ|² 快照"""

    command = "propagate"

    def execute(self) -> Dict[str, Any]:
        section = self.config['propagate']
        nu = section.get('nu', 1)
        method = section.get('method', 'wkb')
        times = sorted({0.0, *(float(t) for t in section['times'])})
        packet = packet_data(section['packet'])

        rows: List[List[Any]] = []
        summary: Dict[str, Any] = {'nu': nu, 'method': method, 'times': times}
        if method in ('wkb', 'both'):
            summary.update(self._wkb(nu, times, packet, section, rows))
        if method in ('cn', 'both'):
            summary.update(self._cn(nu, times, packet, float(section['dt']), rows))
        self.write_table('propagate.csv', ['method', 't', 'x', 'density'], rows)
        return summary

    def _wkb(self, nu: int, times: Sequence[float], packet, section: Dict[str, Any],
             rows: List[List[Any]]) -> Dict[str, Any]:
        S0, phi0, dS0, d2S0 = packet
        potential, x_grid, h = self.effective_potential(nu)
        x0, width = float(section['packet']['x0']), float(section['packet']['width'])
        starts = np.linspace(max(x0 - PACKET_SPAN * width, x_grid.start), min(x0 + PACKET_SPAN * width, x_grid.stop),
                             section.get('n_trajectories', DEFAULT_TRAJECTORIES))
        fan = launch_fan(potential_field(potential), starts, S0, phi0, times, dS0=dS0, d2S0=d2S0,
                         max_workers=self.threads)

        x_query = np.linspace(x_grid.start, x_grid.stop, section.get('n_query', DEFAULT_QUERY))
        density = None
        for t in times:
            density = np.abs(wkb_evaluate(fan, t, x_query, h)) ** 2
            rows.extend(['wkb', t, x, d] for x, d in zip(x_query, density))
        return {'h': h, 'wkb_centroid': centroid(x_query, density)}

    def _cn(self, nu: int, times: Sequence[float], packet, dt: float, rows: List[List[Any]]) -> Dict[str, Any]:
        S0, phi0, _, _ = packet
        mu = float(self.config['mu'])
        setup = self.waveguide(nu + 1)
        xs = setup.x_grid.points
        grid = Rect2DGrid(setup.x_grid, setup.y_grid)
        v_ext = np.asarray(ModelFactory.external_potential(self.config)(xs), dtype=float) + np.zeros(len(xs))
        op = assemble_2d(mu, sample_potential(setup.model, setup.x_grid, setup.y_grid) + v_ext[:, None], grid)

        values = setup.branches[nu - 1].w * (phi0(xs) * np.exp(1j * S0(xs) / mu))[:, None]
        values[0] = values[-1] = 0.0
        psi = Wavefunction2D(grid, values).normalized()

        norm_drift = 0.0
        previous = 0.0
        for t in times:
            steps = int(round((t - previous) / dt))
            if steps > 0:
                evolution = evolve_cn(psi, op, mu, dt, steps)
                psi = evolution.final
                norm_drift = max(norm_drift, evolution.norm_drift)
            previous = t
            rows.extend(['cn', t, x, d] for x, d in zip(xs, psi.x_density()))

        leakage = mode_leakage(psi, setup.branches, nu=nu)
        self.logger.info(f"📊 Crank–Nicolson 末态: 模式泄漏 {leakage:.3e}, 范数漂移 {norm_drift:.2e}")
        return {
            'mu': mu,
            'cn_centroid': psi.centroid_x(),
            'leakage': leakage,
            'norm_drift': norm_drift,
        }
