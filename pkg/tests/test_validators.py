"""
配置验证器与验收规则测试
"""

import copy

import pytest

from adiax.exceptions import ConfigValidationError
from adiax.validators import (
    ACCEPTANCE_RULES,
    ValidationResult,
    create_acceptance_rules,
    create_config_validator,
)
from adiax.validators.rules.acceptance import AdiabaticOrderRule
from adiax.validators.rules.common import CommandRequirementRule, GridRule

HARMONIC_WELL = {
    "problem": "effective",
    "h": 0.1,
    "grid": {"x": {"start": -3.0, "stop": 3.0, "n": 601}},
    "effective": {"potential": {"type": "polynomial", "coeffs": [0.0, 0.0, 0.5]}},
    "bound_states": {"n": [0, 1, 2]},
}


def with_changes(base, **changes):
    data = copy.deepcopy(base)
    data.update(changes)
    return data


def errors_for(command, data):
    with pytest.raises(ConfigValidationError) as excinfo:
        create_config_validator(command).validate_or_raise(data)
    return excinfo.value.errors


def test_valid_config_gets_default_seed():
    validated = create_config_validator("bound-states").validate_or_raise(HARMONIC_WELL)

    assert validated["seed"] == 0
    assert "seed" not in HARMONIC_WELL


def test_explicit_seed_kept():
    validated = create_config_validator("bound-states").validate_or_raise(with_changes(HARMONIC_WELL, seed=7))
    assert validated["seed"] == 7


def test_unknown_key_rejected():
    errors = errors_for("bound-states", with_changes(HARMONIC_WELL, temperature=1.0))

    assert len(errors) == 1
    assert errors[0].startswith("Schema validation failed")


def test_schema_errors_skip_custom_rules():
    validator = create_config_validator("bound-states")
    _, report = validator.validate_data({"problem": "plasma"})

    assert report["schema_validation"] is False
    assert report["custom_validation"] is True
    assert report["corrections"] == []


def test_non_finite_numbers_rejected():
    errors = errors_for("bound-states", with_changes(HARMONIC_WELL, h=float("inf")))
    assert any("不是有限数" in e for e in errors)


@pytest.mark.parametrize("grid, fragment", [
    ({"x": {"start": 1.0, "stop": -1.0, "n": 64}}, "必须大于"),
    ({"x": {"start": -1.0, "stop": 1.0, "n": 8}}, "小于 16"),
    ({"x": {"start": -1.0, "stop": 1.0, "n": 64}, "P_nodes": 32}, "P_nodes"),
    ({"x": {"start": -1.0, "stop": 1.0, "n": 64}, "n_pw": 2}, "n_pw"),
])
def test_grid_rule(grid, fragment):
    result = GridRule().validate({"grid": grid})

    assert not result.is_valid
    assert any(fragment in e for e in result.errors)


def test_grid_rule_accepts_odd_momentum_grid():
    assert GridRule().validate({"grid": {"x": {"start": 0.0, "stop": 1.0, "n": 16}, "P_nodes": 65}}).is_valid


@pytest.mark.parametrize("changes, fragment", [
    ({"mu": 1.5, "regime": "ShortWave"}, "不在 (0, 1) 内"),
    ({"regime": "ShortWave"}, "必须同时给定 mu"),
    ({"bound_states": {"window": [0.5, 0.1]}}, "E_lo < E_hi"),
])
def test_parameter_ranges(changes, fragment):
    errors = errors_for("bound-states", with_changes(HARMONIC_WELL, **changes))
    assert any(fragment in e for e in errors)


def test_bound_states_needs_exactly_one_selector():
    both = with_changes(HARMONIC_WELL, bound_states={"n": [0], "window": [0.0, 1.0]})
    neither = with_changes(HARMONIC_WELL, bound_states={"method": "bohr_sommerfeld"})

    for data in (both, neither):
        assert any("只能给出一个" in e for e in errors_for("bound-states", data))


def test_effective_problem_needs_h():
    data = copy.deepcopy(HARMONIC_WELL)
    del data["h"]

    assert any("需要 h" in e for e in errors_for("bound-states", data))


def test_command_problem_compatibility():
    rule = CommandRequirementRule("bands")
    result = rule.validate(HARMONIC_WELL)

    assert not result.is_valid
    assert any("不支持 problem = effective" in e for e in result.errors)


def test_crank_nicolson_needs_waveguide_and_step():
    data = with_changes(HARMONIC_WELL, propagate={
        "method": "cn", "times": [0.0, 1.0], "packet": {"x0": 0.0, "p0": 0.5, "width": 0.4}})
    del data["bound_states"]

    errors = errors_for("propagate", data)
    assert any("problem = waveguide" in e for e in errors)
    assert any("propagate.dt" in e for e in errors)


def test_regimes_needs_only_mu():
    config = {"problem": "effective", "mu": 0.01, "regimes": {"h_values": [0.01, 0.1]}}
    assert create_config_validator("regimes").validate_or_raise(config)["mu"] == 0.01

    del config["mu"]
    assert any("需要 mu" in e for e in errors_for("regimes", config))


def test_validation_result_records_and_requires():
    result = ValidationResult()
    result.record("drift", 1e-12)
    result.require(True, "不会出现")
    assert result.is_valid and result.metrics == {"drift": 1e-12}

    result.require(False, "超出容差")
    assert not result.is_valid
    assert result.errors == ["超出容差"]


def test_acceptance_rule_selection():
    fast = create_acceptance_rules()
    assert [rule.criterion for rule in fast] == [1, 3, 4, 5, 6, 7, 9, 10]

    everything = create_acceptance_rules(include_slow=True)
    assert [rule.criterion for rule in everything] == list(range(1, 11))
    assert [rule.criterion for rule in create_acceptance_rules([2, 9])] == [9]
    assert len(ACCEPTANCE_RULES) == 10


@pytest.mark.parametrize("errors, valid", [
    ([0.04, 0.01], True),
    ([0.02, 0.01], False),
    ([0.08, 0.01], False),
    ([0.05, 0.01], True),
])
def test_adiabatic_order_ratio_window(errors, valid):
    """误差比须落在 [2.5, 6]：收敛过慢或过快都判为失败"""
    result = ValidationResult()
    AdiabaticOrderRule().judge(result, errors)

    assert result.is_valid is valid
    assert result.metrics["ratio"] == pytest.approx(errors[0] / errors[1])


@pytest.mark.parametrize("criterion", [1, 3, 4, 5, 6, 7, 9, 10])
def test_fast_acceptance_rules_pass(criterion):
    rule = create_acceptance_rules([criterion])[0]
    result = rule.validate({})

    assert result.is_valid, result.errors
    assert "error" not in result.metrics


@pytest.mark.slow
@pytest.mark.parametrize("criterion", [2, 8])
def test_heavy_acceptance_rules_pass(criterion):
    rule = create_acceptance_rules([criterion], include_slow=True)[0]
    result = rule.validate({})

    assert result.is_valid, result.errors
