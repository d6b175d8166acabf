"""
运行配置模板

YAML/JSON 预设文件的加载、合并与Schema校验。
"""

import copy
import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema
import yaml

from ..exceptions import ConfigValidationError
from ..validators.schema import RUN_CONFIG_SCHEMA

PRESET_DIR = Path(__file__).parent


class BaseTemplate(ABC):
    """模板基类，定义通用接口"""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or {}
        self.schema = self.load_schema()

    @abstractmethod
    def load_schema(self) -> Dict[str, Any]:
        """加载运行配置的JSON Schema"""

    @abstractmethod
    def create_config(self, **overrides) -> Dict[str, Any]:
        """生成运行配置"""

    def validate_output(self, output: Dict[str, Any]) -> bool:
        """检查生成的配置是否符合Schema"""
        try:
            jsonschema.validate(output, self.schema)
            return True
        except jsonschema.ValidationError:
            return False


class ConfigTemplate(BaseTemplate):
    """可配置的运行预设"""

    def __init__(self, template_config_path: Optional[str] = None):
        if template_config_path is None:
            self.template_config = self._get_default_config()
            self.template_config_path = None
        else:
            self.template_config_path = Path(template_config_path)
            with open(template_config_path, 'r', encoding='utf-8') as f:
                if str(template_config_path).endswith(('.yaml', '.yml')):
                    self.template_config = yaml.safe_load(f)
                else:
                    self.template_config = json.load(f)

        if not isinstance(self.template_config, dict) or 'config' not in self.template_config:
            raise ConfigValidationError(f"预设文件缺少 config 段: {template_config_path}")
        super().__init__(self.template_config['config'])

    @classmethod
    def from_preset(cls, name: str) -> 'ConfigTemplate':
        """按名称加载内置预设"""
        path = PRESET_DIR / f"{name}.yaml"
        if not path.exists():
            raise ConfigValidationError(f"未知的预设: {name}（可选: {', '.join(list_presets())}）")
        return cls(str(path))

    def _get_default_config(self) -> Dict[str, Any]:
        """默认预设：谐振子势阱的 Bohr–Sommerfeld 能级"""
        return {
            "name": "默认预设",
            "description": "v = x²/2, h = 0.1 的最低四个能级",
            "version": "1.0",
            "command": "bound-states",
            "config": {
                "problem": "effective",
                "h": 0.1,
                "grid": {"x": {"start": -3.0, "stop": 3.0, "n": 601}},
                "effective": {"potential": {"type": "polynomial", "coeffs": [0.0, 0.0, 0.5]}},
                "bound_states": {"n": [0, 1, 2, 3]},
            },
        }

    def load_schema(self) -> Dict[str, Any]:
        return RUN_CONFIG_SCHEMA

    @property
    def command(self) -> str:
        return self.template_config.get('command', 'validate')

    def create_config(self, **overrides) -> Dict[str, Any]:
        """预设配置的深拷贝，顶层键可被覆盖"""
        config = copy.deepcopy(self.config)
        config.update(copy.deepcopy(overrides))
        return config

    def get_template_info(self) -> Dict[str, Any]:
        """获取模板信息"""
        return {
            'name': self.template_config.get('name', 'Unknown'),
            'description': self.template_config.get('description', ''),
            'version': self.template_config.get('version', '1.0'),
            'command': self.command,
            'problem': self.config.get('problem'),
        }


def list_presets() -> List[str]:
    """内置预设名称（按字母序）"""
    return sorted(path.stem for path in PRESET_DIR.glob('*.yaml'))
