"""
运行配置的JSON Schema（Draft 7）

所有对象层级均为 additionalProperties: false，未知键一律拒绝。
"""

COMMANDS = ("bands", "reduce", "bound-states", "scatter", "propagate", "validate", "regimes")

REGIME_TAGS = ["ShortWave", "MediumWave", "LongWave", "UltraShortWave"]


def _object(properties, required=()):
    return {
        "type": "object",
        "properties": properties,
        "required": list(required),
        "additionalProperties": False,
    }


_NUMBER = {"type": "number"}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_PROFILE_REF = {"$ref": "#/definitions/profile"}
_NUMBER_LIST = {"type": "array", "items": _NUMBER, "minItems": 1}

PROFILE_SCHEMA = {
    "oneOf": [
        _NUMBER,
        _object({"type": {"const": "constant"}, "value": _NUMBER}, ["type", "value"]),
        _object({"type": {"const": "polynomial"}, "coeffs": _NUMBER_LIST}, ["type", "coeffs"]),
        _object({"type": {"const": "gaussian"}, "amplitude": _NUMBER, "center": _NUMBER, "width": _POSITIVE,
                 "base": _NUMBER}, ["type", "amplitude"]),
        _object({"type": {"const": "sech"}, "amplitude": _NUMBER, "center": _NUMBER, "width": _POSITIVE,
                 "base": _NUMBER}, ["type", "amplitude"]),
        _object({"type": {"const": "cosine"}, "amplitude": _NUMBER, "frequency": _NUMBER, "phase": _NUMBER,
                 "base": _NUMBER}, ["type", "amplitude"]),
        _object({"type": {"const": "tabulated"}, "x": {"type": "array", "items": _NUMBER, "minItems": 4},
                 "values": {"type": "array", "items": _NUMBER, "minItems": 4}}, ["type", "x", "values"]),
        _object({"type": {"const": "sum"}, "terms": {"type": "array", "items": _PROFILE_REF, "minItems": 1}},
                ["type", "terms"]),
    ]
}

GRID_SCHEMA = _object({"start": _NUMBER, "stop": _NUMBER, "n": {"type": "integer"}}, ["start", "stop", "n"])

CONFINEMENT_SCHEMA = {
    "oneOf": [
        _object({"type": {"const": "harmonic"}, "omega": _PROFILE_REF, "offset": _NUMBER}, ["type"]),
        _object({"type": {"const": "rigid_wall"}, "lower": _PROFILE_REF, "upper": _PROFILE_REF}, ["type"]),
        _object({"type": {"const": "power_well"}, "m": _NUMBER, "amplitude": _NUMBER, "dilation": _PROFILE_REF,
                 "offset": _NUMBER}, ["type"]),
    ]
}

PERIODIC_SCHEMA = {
    "oneOf": [
        _object({"type": {"const": "mathieu"}, "a": _NUMBER}, ["type", "a"]),
        _object({"type": {"const": "fourier"},
                 "coefficients": {"type": "array", "minItems": 1,
                                  "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}}},
                ["type", "coefficients"]),
    ]
}

GENERATOR_SCHEMA = {
    "oneOf": [
        _object({"type": {"const": "constant"}, "value": _NUMBER}, ["type", "value"]),
        _object({"type": {"const": "diagonal"}, "values": _NUMBER_LIST}, ["type", "values"]),
        _object({"type": {"const": "matrix"},
                 "real": {"type": "array", "items": _NUMBER_LIST, "minItems": 1},
                 "imag": {"type": "array", "items": _NUMBER_LIST, "minItems": 1}}, ["type", "real"]),
    ]
}

PACKET_SCHEMA = _object({
    "x0": _NUMBER,
    "p0": _NUMBER,
    "width": _POSITIVE,
    "focus": _NUMBER,
}, ["x0", "p0", "width"])

ENERGY_SWEEP_SCHEMA = {
    "oneOf": [
        _NUMBER_LIST,
        _object({"start": _NUMBER, "stop": _NUMBER, "n": {"type": "integer"}}, ["start", "stop", "n"]),
    ]
}

RUN_CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "adiax run configuration",
    "definitions": {"profile": PROFILE_SCHEMA},
    "type": "object",
    "additionalProperties": False,
    "required": ["problem"],
    "properties": {
        "problem": {"enum": ["waveguide", "bloch", "effective"]},
        "mu": _NUMBER,
        "h": _NUMBER,
        "regime": {"enum": REGIME_TAGS},
        "seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
        "grid": _object({
            "x": GRID_SCHEMA,
            "y": GRID_SCHEMA,
            "P_nodes": {"type": "integer"},
            "ny": {"type": "integer"},
            "n_pw": {"type": "integer"},
        }, ["x"]),
        "waveguide": _object({
            "confinement": CONFINEMENT_SCHEMA,
            "external_potential": _PROFILE_REF,
            "curvature": _PROFILE_REF,
            "gap_tol": _POSITIVE,
        }, ["confinement"]),
        "bloch": _object({
            "potential": PERIODIC_SCHEMA,
            "U": _PROFILE_REF,
            "gap_tol": _POSITIVE,
        }, ["potential"]),
        "effective": _object({"potential": _PROFILE_REF}, ["potential"]),
        "bands": _object({"K": {"type": "integer"}}),
        "reduce": _object({
            "nu": {"type": "integer"},
            "K": {"type": "integer"},
            "corrections": {"type": "boolean"},
        }),
        "bound_states": _object({
            "nu": {"type": "integer"},
            "n": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
            "window": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
            "method": {"enum": ["bohr_sommerfeld", "direct", "both"]},
            "generator": GENERATOR_SCHEMA,
        }),
        "scatter": _object({
            "energies": ENERGY_SWEEP_SCHEMA,
            "nu": {"type": "integer"},
            "offsets": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
        }, ["energies"]),
        "propagate": _object({
            "method": {"enum": ["wkb", "cn", "both"]},
            "nu": {"type": "integer"},
            "times": _NUMBER_LIST,
            "packet": PACKET_SCHEMA,
            "dt": _POSITIVE,
            "n_trajectories": {"type": "integer"},
            "n_query": {"type": "integer"},
        }, ["times", "packet"]),
        "validate": _object({
            "criteria": {"type": "array", "items": {"type": "integer", "minimum": 1, "maximum": 10}},
            "include_slow": {"type": "boolean"},
        }),
        "regimes": _object({
            "h_values": _NUMBER_LIST,
        }, ["h_values"]),
    },
}
