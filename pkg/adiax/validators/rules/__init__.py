"""
验证规则集合

配置的跨字段检查规则与验收检查规则。
"""

from .common import (
    CommandRequirementRule,
    DefaultsRule,
    DefaultValueCorrection,
    FiniteNumbersRule,
    GridRule,
    ModelParameterRule,
    ParameterRangeRule,
)
from .acceptance import ACCEPTANCE_RULES, AcceptanceRule, create_acceptance_rules

__all__ = [
    'CommandRequirementRule',
    'DefaultsRule',
    'DefaultValueCorrection',
    'FiniteNumbersRule',
    'GridRule',
    'ModelParameterRule',
    'ParameterRangeRule',
    'ACCEPTANCE_RULES',
    'AcceptanceRule',
    'create_acceptance_rules',
]
