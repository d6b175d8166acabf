"""
通用配置规则

Schema 之外的跨字段检查：网格、参数范围、命令所需的配置段与有限性。
"""

import copy
import math
from typing import Any, Dict, List, Optional

from ..base import ValidationCorrection, ValidationResult, ValidationRule

MIN_GRID_NODES = 16


class DefaultValueCorrection(ValidationCorrection):
    """为缺失字段补默认值"""

    def __init__(self, key: str, value: Any):
        super().__init__(f"补充默认值 {key} = {value!r}")
        self.key = key
        self.value = value

    def apply(self, data: Dict[str, Any]) -> Dict[str, Any]:
        corrected = copy.deepcopy(data)
        corrected.setdefault(self.key, self.value)
        return corrected


class DefaultsRule(ValidationRule):
    """顶层默认值：seed = 0"""

    def __init__(self, defaults: Optional[Dict[str, Any]] = None):
        super().__init__("defaults", "补充顶层默认值")
        self.defaults = defaults or {"seed": 0}

    def validate(self, data: Dict[str, Any]) -> ValidationResult:
        result = ValidationResult()
        for key, value in self.defaults.items():
            if key not in data:
                result.add_correction(DefaultValueCorrection(key, value))
        return result


class FiniteNumbersRule(ValidationRule):
    """所有数值必须有限（JSON解析器接受 NaN/Infinity）"""

    def __init__(self):
        super().__init__("finite_numbers", "检查数值有限")

    def validate(self, data: Dict[str, Any]) -> ValidationResult:
        result = ValidationResult()
        self._walk(data, "", result)
        return result

    def _walk(self, obj: Any, path: str, result: ValidationResult):
        if isinstance(obj, dict):
            for key, value in obj.items():
                self._walk(value, f"{path}.{key}" if path else key, result)
        elif isinstance(obj, list):
            for i, item in enumerate(obj):
                self._walk(item, f"{path}[{i}]", result)
        elif isinstance(obj, float) and not math.isfinite(obj):
            result.add_error(f"{path} 不是有限数: {obj}")


class GridRule(ValidationRule):
    """网格区间有序、节点数 ≥ 16；P 网格节点数为奇数"""

    def __init__(self, min_nodes: int = MIN_GRID_NODES):
        super().__init__("grid", "检查网格参数")
        self.min_nodes = min_nodes

    def validate(self, data: Dict[str, Any]) -> ValidationResult:
        result = ValidationResult()
        grid = data.get("grid")
        if grid is None:
            return result
        for axis in ("x", "y"):
            entry = grid.get(axis)
            if entry is None:
                continue
            if not entry["stop"] > entry["start"]:
                result.add_error(f"grid.{axis}: stop = {entry['stop']} 必须大于 start = {entry['start']}")
            if entry["n"] < self.min_nodes:
                result.add_error(f"grid.{axis}.n = {entry['n']} 小于 {self.min_nodes}")
        if "P_nodes" in grid:
            n = grid["P_nodes"]
            if n < self.min_nodes + 1 or n % 2 == 0:
                result.add_error(f"grid.P_nodes = {n} 必须为奇数且 ≥ {self.min_nodes + 1}")
        if "ny" in grid and grid["ny"] < self.min_nodes:
            result.add_error(f"grid.ny = {grid['ny']} 小于 {self.min_nodes}")
        if "n_pw" in grid and grid["n_pw"] < 4:
            result.add_error(f"grid.n_pw = {grid['n_pw']} 小于 4")
        return result


class ParameterRangeRule(ValidationRule):
    """0 < μ < 1，h > 0，正整数计数参数"""

    COUNT_FIELDS = (("bands", "K"), ("reduce", "K"), ("reduce", "nu"), ("bound_states", "nu"),
                    ("scatter", "nu"), ("propagate", "nu"))

    def __init__(self):
        super().__init__("parameter_range", "检查参数范围")

    def validate(self, data: Dict[str, Any]) -> ValidationResult:
        result = ValidationResult()
        if "mu" in data and not 0.0 < data["mu"] < 1.0:
            result.add_error(f"mu = {data['mu']} 不在 (0, 1) 内")
        if "h" in data and not data["h"] > 0.0:
            result.add_error(f"h = {data['h']} 必须为正")
        if "regime" in data and "mu" not in data:
            result.add_error("给定 regime 时必须同时给定 mu")
        for section, key in self.COUNT_FIELDS:
            value = data.get(section, {}).get(key)
            if value is not None and value < 1:
                result.add_error(f"{section}.{key} = {value} 必须 ≥ 1")

        bound = data.get("bound_states", {})
        if "window" in bound and not bound["window"][1] > bound["window"][0]:
            result.add_error(f"bound_states.window 必须满足 E_lo < E_hi: {bound['window']}")

        propagate = data.get("propagate")
        if propagate:
            if any(t < 0 for t in propagate["times"]):
                result.add_error("propagate.times 必须非负")
            if propagate.get("n_trajectories", 64) < MIN_GRID_NODES:
                result.add_error(f"propagate.n_trajectories 小于 {MIN_GRID_NODES}")
            if propagate.get("n_query", 201) < 2:
                result.add_error("propagate.n_query 至少为 2")

        sweep = data.get("scatter", {}).get("energies")
        if isinstance(sweep, dict) and sweep["n"] < 1:
            result.add_error("scatter.energies.n 必须 ≥ 1")
        return result


class ModelParameterRule(ValidationRule):
    """约束模型与周期势参数为正（仅检查常数剖面）"""

    def __init__(self):
        super().__init__("model_parameters", "检查模型参数为正")

    def validate(self, data: Dict[str, Any]) -> ValidationResult:
        result = ValidationResult()
        confinement = data.get("waveguide", {}).get("confinement")
        if confinement:
            kind = confinement["type"]
            if kind == "harmonic":
                self._positive(confinement.get("omega", 1.0), "waveguide.confinement.omega", result)
            elif kind == "power_well":
                for key in ("m", "amplitude"):
                    value = confinement.get(key, 1.0)
                    if value <= 0:
                        result.add_error(f"waveguide.confinement.{key} = {value} 必须为正")
                self._positive(confinement.get("dilation", 1.0), "waveguide.confinement.dilation", result)
            elif kind == "rigid_wall":
                lower, upper = confinement.get("lower", 0.0), confinement.get("upper", 1.0)
                if isinstance(lower, (int, float)) and isinstance(upper, (int, float)) and not upper > lower:
                    result.add_error(f"waveguide.confinement: upper = {upper} 必须大于 lower = {lower}")
        bloch = data.get("bloch")
        if bloch:
            self._positive(bloch.get("U", 1.0), "bloch.U", result)
            coefficients = bloch["potential"].get("coefficients")
            if coefficients is not None and len(coefficients) % 2 != 1:
                result.add_error("bloch.potential.coefficients 的长度必须为奇数 (2N+1)")
        generator = data.get("bound_states", {}).get("generator")
        if generator and generator["type"] == "matrix":
            rows = generator["real"]
            if any(len(row) != len(rows) for row in rows):
                result.add_error("bound_states.generator.real 必须为方阵")
            imag = generator.get("imag")
            if imag is not None and (len(imag) != len(rows) or any(len(row) != len(rows) for row in imag)):
                result.add_error("bound_states.generator.imag 与 real 形状不一致")
        return result

    @staticmethod
    def _positive(profile: Any, path: str, result: ValidationResult):
        value = profile.get("value") if isinstance(profile, dict) and profile.get("type") == "constant" else profile
        if isinstance(value, (int, float)) and not value > 0:
            result.add_error(f"{path} = {value} 必须为正")


class CommandRequirementRule(ValidationRule):
    """命令所需的问题类型与配置段"""

    ALLOWED_PROBLEMS = {
        "bands": ("waveguide", "bloch"),
        "reduce": ("waveguide", "bloch"),
        "bound-states": ("waveguide", "effective"),
        "scatter": ("waveguide", "effective"),
        "propagate": ("waveguide", "effective"),
    }
    REQUIRED_SECTIONS = {
        "bound-states": ("bound_states",),
        "scatter": ("scatter",),
        "propagate": ("propagate",),
        "regimes": ("regimes",),
    }

    def __init__(self, command: str):
        super().__init__("command_requirements", f"检查命令 {command} 所需的配置")
        self.command = command

    def validate(self, data: Dict[str, Any]) -> ValidationResult:
        result = ValidationResult()
        command, problem = self.command, data["problem"]
        if command not in ("regimes", "validate"):
            if problem not in data:
                result.add_error(f"problem = {problem} 需要 {problem} 配置段")
            if "grid" not in data:
                result.add_error(f"命令 {command} 需要 grid 配置段")

        allowed = self.ALLOWED_PROBLEMS.get(command)
        if allowed and problem not in allowed:
            result.add_error(f"命令 {command} 不支持 problem = {problem}（可选: {', '.join(allowed)}）")
        for section in self.REQUIRED_SECTIONS.get(command, ()):
            if section not in data:
                result.add_error(f"命令 {command} 需要 {section} 配置段")

        if command == "bound-states":
            bound = data.get("bound_states", {})
            if ("n" in bound) == ("window" in bound):
                result.add_error("bound_states 中 n 与 window 必须且只能给出一个")
        if command == "propagate" and data.get("propagate", {}).get("method", "wkb") in ("cn", "both"):
            if problem != "waveguide":
                result.add_error("Crank–Nicolson 演化只适用于 problem = waveguide")
            if "dt" not in data.get("propagate", {}):
                result.add_error("Crank–Nicolson 演化需要 propagate.dt")
        if command == "regimes" and "mu" not in data:
            result.add_error("regimes 命令需要 mu")
        if command in self.ALLOWED_PROBLEMS:
            self._scales(result, data)
        return result

    def _scales(self, result: ValidationResult, data: Dict[str, Any]):
        if data["problem"] == "effective":
            if "h" not in data:
                result.add_error(f"problem = effective 的命令 {self.command} 需要 h")
            return
        if "mu" not in data:
            result.add_error(f"命令 {self.command} 需要 mu")
        if self.command != "bands" and "h" not in data and "regime" not in data:
            result.add_error(f"命令 {self.command} 需要 h 或 regime")
