"""
半经典模块

约化一维问题的哈密顿轨道、WKB波列、振幅输运与Floquet指数、
Bohr–Sommerfeld谱级数以及散射渐近。
"""

from .fields import HamiltonianField
from .trajectories import Trajectory, TrajectoryFan, integrate_trajectory, launch_fan, wkb_evaluate
from .transport import (
    SpectralEntry,
    SpectralSeries,
    TransportResult,
    closed_orbit_period,
    floquet_exponents,
    monodromy,
    spectral_series,
    transport_solve,
)
from .quantization import QuantizedLevels, as_potential, bohr_sommerfeld, bohr_sommerfeld_action, evaluate_potential
from .scattering import ScatteringAsymptotics, ScatteringOutcome, scatter_1d

__all__ = [
    'HamiltonianField',
    'Trajectory', 'TrajectoryFan', 'integrate_trajectory', 'launch_fan', 'wkb_evaluate',
    'SpectralEntry', 'SpectralSeries', 'TransportResult', 'closed_orbit_period', 'floquet_exponents', 'monodromy',
    'spectral_series', 'transport_solve',
    'QuantizedLevels', 'as_potential', 'bohr_sommerfeld', 'bohr_sommerfeld_action', 'evaluate_potential',
    'ScatteringAsymptotics', 'ScatteringOutcome', 'scatter_1d',
]
