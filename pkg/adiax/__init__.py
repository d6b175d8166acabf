"""
adiax - 算子分离变量法

二维绝热波动问题的一维约化（横向能级支、Bloch能带、有效哈密顿量与一阶修正）、
约化问题的半经典求解，以及用于对照的二维有限差分参考解。
"""

from .factory import ModelFactory, ProcessorFactory, TemplateFactory
from .processors import PROCESSORS, BaseProcessor, RunResult
from .templates import ConfigTemplate, list_presets
from .validators import ConfigValidator, create_acceptance_rules, create_config_validator
from .transverse import Harmonic, PowerWell, RigidWall, track_branches
from .reduction import (
    Regime,
    assemble_essential,
    build_effective_model,
    classify_regime,
    correction_L1,
    effective_hamiltonian,
    solve_reduced_stationary,
)
from .bloch import PeriodicPotential, compute_bloch_bands
from .semiclassics import HamiltonianField, bohr_sommerfeld, launch_fan, scatter_1d, wkb_evaluate
from .reference2d import Rect2DGrid, assemble_2d, eigs_2d, evolve_cn
from .utils import UniformGrid
from .exceptions import AdiaxError, ConfigValidationError, NumericalError

__version__ = "1.0.0"
__author__ = "ADIAX Team"

# 主要导出
__all__ = [
    # 工厂类
    "ModelFactory",
    "ProcessorFactory",
    "TemplateFactory",

    # 命令处理器
    "PROCESSORS",
    "BaseProcessor",
    "RunResult",

    # 模板和验证器
    "ConfigTemplate",
    "list_presets",
    "ConfigValidator",
    "create_config_validator",
    "create_acceptance_rules",

    # 约化与求解
    "UniformGrid",
    "Harmonic",
    "PowerWell",
    "RigidWall",
    "track_branches",
    "Regime",
    "classify_regime",
    "effective_hamiltonian",
    "correction_L1",
    "build_effective_model",
    "assemble_essential",
    "solve_reduced_stationary",
    "PeriodicPotential",
    "compute_bloch_bands",
    "HamiltonianField",
    "bohr_sommerfeld",
    "launch_fan",
    "wkb_evaluate",
    "scatter_1d",
    "Rect2DGrid",
    "assemble_2d",
    "eigs_2d",
    "evolve_cn",

    # 异常类
    "AdiaxError",
    "ConfigValidationError",
    "NumericalError",
]
