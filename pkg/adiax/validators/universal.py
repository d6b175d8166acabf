"""
运行配置验证器

基于JSON Schema和自定义规则的两阶段验证。
"""

from typing import Any, Dict, List, Optional, Tuple

import jsonschema

from ..exceptions import ConfigValidationError
from .base import BaseValidator, ValidationRule
from .rules.common import (
    CommandRequirementRule,
    DefaultsRule,
    FiniteNumbersRule,
    GridRule,
    ModelParameterRule,
    ParameterRangeRule,
)
from .schema import RUN_CONFIG_SCHEMA


class ConfigValidator(BaseValidator):
    """配置验证器：先做Schema验证，通过后再执行自定义规则"""

    def __init__(self, schema: Dict[str, Any], custom_rules: Optional[List[ValidationRule]] = None):
        super().__init__()
        self.schema = schema
        self.custom_rules = custom_rules or []

    def validate_data(self, data: Dict[str, Any]) -> Tuple[Dict[str, Any], Dict[str, Any]]:
        """验证数据"""
        self.reset_validation_report()
        validated_data = dict(data)

        # 1. JSON Schema验证
        validator = jsonschema.Draft7Validator(self.schema)
        for error in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
            location = "/".join(str(part) for part in error.absolute_path) or "<root>"
            self.validation_report["schema_validation"] = False
            self.validation_report["errors"].append(f"Schema validation failed at {location}: {error.message}")
        if not self.validation_report["schema_validation"]:
            return validated_data, self.validation_report

        # 2. 自定义规则验证
        for rule in self.custom_rules:
            try:
                rule_result = rule.validate(validated_data)
                if not rule_result.is_valid:
                    self.validation_report["custom_validation"] = False
                    self.validation_report["errors"].extend(rule_result.errors)

                self.validation_report["warnings"].extend(rule_result.warnings)

                # 应用修正
                for correction in rule_result.corrections:
                    validated_data = correction.apply(validated_data)
                    self.validation_report["corrections"].append(correction.description)

            except Exception as e:
                self.validation_report["custom_validation"] = False
                self.validation_report["errors"].append(f"Custom rule '{rule.name}' failed: {str(e)}")

        return validated_data, self.validation_report

    def validate_or_raise(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """验证并在失败时抛出 ConfigValidationError"""
        validated, report = self.validate_data(data)
        if report["errors"]:
            raise ConfigValidationError(f"配置验证失败: {len(report['errors'])} 个错误", report["errors"])
        return validated


def create_config_validator(command: str) -> ConfigValidator:
    """命令对应的标准验证器"""
    rules = [
        DefaultsRule(),
        FiniteNumbersRule(),
        GridRule(),
        ParameterRangeRule(),
        ModelParameterRule(),
        CommandRequirementRule(command),
    ]
    return ConfigValidator(RUN_CONFIG_SCHEMA, rules)
