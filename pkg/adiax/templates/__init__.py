"""
运行配置预设

提供预设模板的加载接口。
"""

from .base import BaseTemplate, ConfigTemplate, list_presets

__all__ = [
    'BaseTemplate',
    'ConfigTemplate',
    'list_presets',
]
