"""
处理器工厂

根据运行配置创建模型对象、命令处理器与配置预设。
"""

import json
import os
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import yaml
from scipy.interpolate import CubicSpline

from .bloch import PeriodicPotential
from .exceptions import ConfigValidationError
from .reduction import h_for_regime
from .templates.base import ConfigTemplate
from .transverse import ConfinementModel, Harmonic, PowerWell, RigidWall, suggest_y_window
from .utils import UniformGrid, save_json
from .validators.universal import create_config_validator

Profile = Callable[[np.ndarray], np.ndarray]

# 未给出 grid.y 时软壁窗口的节点数
DEFAULT_NY = 129


class ModelFactory:
    """把已验证的配置段转换为领域对象"""

    @staticmethod
    def profile(entry: Any) -> Profile:
        """x 的向量化函数

        Args:
            entry: 数值或 {"type": constant|polynomial|gaussian|sech|cosine|tabulated|sum, ...}

        Returns:
            可调用对象 x ↦ 值
        """
        if isinstance(entry, (int, float)):
            value = float(entry)
            return lambda x: np.full_like(np.asarray(x, dtype=float), value)

        kind = entry['type']
        if kind == 'constant':
            return ModelFactory.profile(entry['value'])
        if kind == 'polynomial':
            # 升幂系数 c₀ + c₁x + c₂x² + …
            coeffs = np.asarray(entry['coeffs'], dtype=float)
            return lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), coeffs)

        amplitude = float(entry.get('amplitude', 0.0))
        base = float(entry.get('base', 0.0))
        center = float(entry.get('center', 0.0))
        width = float(entry.get('width', 1.0))
        if kind == 'gaussian':
            return lambda x: base + amplitude * np.exp(-((np.asarray(x, dtype=float) - center) / width) ** 2)
        if kind == 'sech':
            return lambda x: base + amplitude / np.cosh((np.asarray(x, dtype=float) - center) / width)
        if kind == 'cosine':
            frequency = float(entry.get('frequency', 1.0))
            phase = float(entry.get('phase', 0.0))
            return lambda x: base + amplitude * np.cos(frequency * np.asarray(x, dtype=float) + phase)
        if kind == 'tabulated':
            nodes, values = np.asarray(entry['x'], dtype=float), np.asarray(entry['values'], dtype=float)
            if nodes.shape != values.shape:
                raise ConfigValidationError("tabulated 剖面的 x 与 values 长度不一致")
            if not np.all(np.diff(nodes) > 0):
                raise ConfigValidationError("tabulated 剖面的 x 必须严格递增")
            spline = CubicSpline(nodes, values)
            # 区间外取端点值
            return lambda x: spline(np.clip(np.asarray(x, dtype=float), nodes[0], nodes[-1]))
        if kind == 'sum':
            terms = [ModelFactory.profile(term) for term in entry['terms']]
            return lambda x: sum(term(x) for term in terms)
        raise ConfigValidationError(f"未知的剖面类型: {kind}")

    @staticmethod
    def grid(entry: Dict[str, Any]) -> UniformGrid:
        return UniformGrid(float(entry['start']), float(entry['stop']), int(entry['n']))

    @staticmethod
    def x_grid(config: Dict[str, Any]) -> UniformGrid:
        return ModelFactory.grid(config['grid']['x'])

    @staticmethod
    def y_grid(config: Dict[str, Any], model: ConfinementModel, x_grid: UniformGrid, K: int) -> UniformGrid:
        """grid.y；缺省时取软壁的建议窗口"""
        entry = config['grid'].get('y')
        if entry is not None:
            return ModelFactory.grid(entry)
        lo, hi = suggest_y_window(model, x_grid, K)
        return UniformGrid(lo, hi, DEFAULT_NY)

    @staticmethod
    def confinement(entry: Dict[str, Any]) -> ConfinementModel:
        """横向约束模型"""
        kind = entry['type']
        if kind == 'harmonic':
            return Harmonic(omega=ModelFactory.profile(entry.get('omega', 1.0)),
                            offset=float(entry.get('offset', 0.0)))
        if kind == 'rigid_wall':
            return RigidWall(lower=ModelFactory.profile(entry.get('lower', 0.0)),
                             upper=ModelFactory.profile(entry.get('upper', 1.0)))
        if kind == 'power_well':
            return PowerWell(dilation=ModelFactory.profile(entry.get('dilation', 1.0)), m=float(entry.get('m', 1.0)),
                             amplitude=float(entry.get('amplitude', 1.0)), offset=float(entry.get('offset', 0.0)))
        raise ConfigValidationError(f"未知的约束类型: {kind}")

    @staticmethod
    def external_potential(config: Dict[str, Any]) -> Profile:
        return ModelFactory.profile(config.get('waveguide', {}).get('external_potential', 0.0))

    @staticmethod
    def curvature(config: Dict[str, Any], x_grid: UniformGrid) -> Optional[np.ndarray]:
        """曲率在 x 网格上的采样；未给出时为 None"""
        entry = config.get('waveguide', {}).get('curvature')
        if entry is None:
            return None
        return np.asarray(ModelFactory.profile(entry)(x_grid.points), dtype=float) + np.zeros(x_grid.n)

    @staticmethod
    def periodic_potential(config: Dict[str, Any], x_grid: UniformGrid) -> PeriodicPotential:
        """周期势；Fourier 系数以 [实部, 虚部] 对给出，长度 2N+1"""
        bloch = config['bloch']
        U = ModelFactory.profile(bloch.get('U', 1.0))
        entry = bloch['potential']
        if entry['type'] == 'mathieu':
            return PeriodicPotential.mathieu(float(entry['a']), x_grid, U)
        coeffs = np.array([complex(re, im) for re, im in entry['coefficients']])
        return PeriodicPotential.from_coefficients(x_grid, coeffs, U)

    @staticmethod
    def effective_potential(config: Dict[str, Any]) -> Profile:
        return ModelFactory.profile(config['effective']['potential'])

    @staticmethod
    def generator(entry: Optional[Dict[str, Any]]) -> Optional[Callable[[float, float], Any]]:
        """输运生成元 ℒ₁(p, x)：常数、对角或常矩阵"""
        if entry is None:
            return None
        kind = entry['type']
        if kind == 'constant':
            value = float(entry['value'])
            return lambda p, x: value
        if kind == 'diagonal':
            matrix = np.diag(np.asarray(entry['values'], dtype=float)).astype(complex)
        else:
            matrix = np.asarray(entry['real'], dtype=float) + 1j * np.asarray(entry.get('imag', 0.0), dtype=float)
        return lambda p, x: matrix

    @staticmethod
    def scales(config: Dict[str, Any]) -> Tuple[Optional[float], float]:
        """(μ, h)；只给定区间时 h 取该区间的典型值"""
        mu = config.get('mu')
        if 'h' in config:
            return mu, float(config['h'])
        if mu is None:
            raise ConfigValidationError("缺少 mu，无法确定 h")
        if 'regime' in config:
            return mu, h_for_regime(mu, config['regime'])
        return mu, float(mu)


class ProcessorFactory:
    """处理器工厂，根据命令与配置创建处理器"""

    @staticmethod
    def _processor_class(command: str):
        from .processors import PROCESSORS

        if command not in PROCESSORS:
            raise ConfigValidationError(f"未知命令: {command}")
        return PROCESSORS[command]

    @staticmethod
    def create_processor(command: str, config_path: str, outdir: Optional[str] = None, threads: int = 1):
        """根据配置文件创建处理器

        Args:
            command: 命令名
            config_path: JSON 配置文件路径
            outdir: 输出根目录（覆盖配置中的 output_dir）
            threads: 库内并行线程数

        Returns:
            配置好的处理器实例
        """
        if not os.path.exists(config_path):
            raise ConfigValidationError(f"配置文件不存在: {config_path}")
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                config = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigValidationError(f"配置文件不是合法的JSON: {e}") from e
        return ProcessorFactory.create_from_config(command, config, outdir=outdir, threads=threads)

    @staticmethod
    def create_from_config(command: str, config: Dict[str, Any], outdir: Optional[str] = None, threads: int = 1):
        """根据配置字典创建处理器（先验证）"""
        processor_class = ProcessorFactory._processor_class(command)
        validated = create_config_validator(command).validate_or_raise(config)
        output_root = outdir or validated.get('output_dir') or 'results'
        return processor_class(validated, output_root=output_root, threads=threads)


class TemplateFactory:
    """预设工厂"""

    @staticmethod
    def create_config(preset: str, output_path: str) -> str:
        """把预设渲染为可直接运行的配置文件

        .yaml/.yml 输出完整预设（可编辑后再加载），其余扩展名输出 JSON 运行配置。
        """
        template = ConfigTemplate.from_preset(preset)
        if output_path.endswith(('.yaml', '.yml')):
            with open(output_path, 'w', encoding='utf-8') as f:
                yaml.dump(template.template_config, f, allow_unicode=True, indent=2, sort_keys=False)
            return output_path

        config = create_config_validator(template.command).validate_or_raise(template.create_config())
        save_json(config, output_path)
        return output_path
