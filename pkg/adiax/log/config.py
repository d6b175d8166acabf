"""
日志配置

LogConfig 描述处理器、格式与轮转参数；LogProfile 是几种常用运行方式的预设。
命令行启动时依次查看 --log-config / ADIAX_LOG_CONFIG 与 --log-profile / ADIAX_LOG_PROFILE。
"""

import json
import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Optional, Tuple

LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')

LOG_CONFIG_ENV = 'ADIAX_LOG_CONFIG'
LOG_PROFILE_ENV = 'ADIAX_LOG_PROFILE'


@dataclass
class LogConfig:
    """日志配置；默认只写控制台，文件日志按需开启"""

    log_level: str = "INFO"
    log_dir: str = "logs"
    max_file_size: int = 20 * 1024 * 1024
    backup_count: int = 5
    enable_console: bool = True
    enable_file: bool = False
    enable_json: bool = False
    separate_error_log: bool = True
    console_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
    json_fields: Tuple[str, ...] = ("asctime", "name", "levelname", "filename", "lineno")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['json_fields'] = list(self.json_fields)
        return data

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'LogConfig':
        """从字典创建配置，未知键被忽略"""
        known = {f.name for f in fields(cls)}
        values = {key: value for key, value in data.items() if key in known}
        if 'json_fields' in values:
            values['json_fields'] = tuple(values['json_fields'])
        config = cls(**values)
        config.validate()
        return config

    @classmethod
    def from_json_file(cls, file_path: str) -> 'LogConfig':
        """从JSON文件加载；日志段可以放在顶层，也可以嵌套在 logging 键下"""
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"日志配置文件不存在: {file_path}")

        with open(file_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        section = data.get('logging', data) if isinstance(data, dict) else None
        if not isinstance(section, dict):
            raise ValueError(f"日志配置应为JSON对象: {file_path}")
        return cls.from_dict(section)

    def validate(self) -> bool:
        if str(self.log_level).upper() not in LEVELS:
            raise ValueError(f"无效的日志级别: {self.log_level}")
        if self.max_file_size <= 0:
            raise ValueError(f"无效的最大文件大小: {self.max_file_size}")
        if self.backup_count < 0:
            raise ValueError(f"无效的备份文件数: {self.backup_count}")
        return True


class LogProfile:
    """运行方式预设

    interactive  控制台 INFO（默认）
    debug        控制台 DEBUG，逐节点的间隙、重叠与残差都会输出
    quiet        只输出警告以上，适合测试与持续集成
    batch        参数扫描或集群作业：INFO，另写 JSON 行格式的轮转文件
    """

    PRESETS: Dict[str, Dict[str, Any]] = {
        'interactive': {},
        'debug': {'log_level': 'DEBUG'},
        'quiet': {'log_level': 'WARNING'},
        'batch': {'enable_file': True, 'enable_json': True},
    }

    def __init__(self, name: str = "interactive"):
        self.name = name.lower()

    def get_config(self) -> LogConfig:
        if self.name not in self.PRESETS:
            raise ValueError(f"不支持的日志预设: {self.name}. 可用预设: {sorted(self.PRESETS)}")
        return LogConfig.from_dict(self.PRESETS[self.name])


def resolve_log_config(config_file: Optional[str] = None, profile: Optional[str] = None,
                       environ: Optional[Mapping[str, str]] = None) -> LogConfig:
    """确定一次运行的日志配置

    顺序：config_file、ADIAX_LOG_CONFIG、profile、ADIAX_LOG_PROFILE，都没有时用 interactive。
    """
    environ = os.environ if environ is None else environ
    config_file = config_file or environ.get(LOG_CONFIG_ENV)
    if config_file:
        return LogConfig.from_json_file(config_file)
    return LogProfile(profile or environ.get(LOG_PROFILE_ENV) or "interactive").get_config()
