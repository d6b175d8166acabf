"""
配置验证与验收检查

基于JSON Schema和自定义规则的运行配置验证，以及数值验收规则。
"""

from .base import BaseValidator, ValidationCorrection, ValidationResult, ValidationRule
from .schema import COMMANDS, RUN_CONFIG_SCHEMA
from .universal import ConfigValidator, create_config_validator
from .rules import ACCEPTANCE_RULES, AcceptanceRule, create_acceptance_rules

__all__ = [
    'BaseValidator',
    'ValidationCorrection',
    'ValidationResult',
    'ValidationRule',
    'COMMANDS',
    'RUN_CONFIG_SCHEMA',
    'ConfigValidator',
    'create_config_validator',
    'ACCEPTANCE_RULES',
    'AcceptanceRule',
    'create_acceptance_rules',
]
