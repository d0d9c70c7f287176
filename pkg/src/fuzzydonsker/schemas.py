"""JSON schemas for every file format the package reads or writes."""

import jsonschema

from .errors import InvalidConfig

_NUM = {"type": "number"}
_VEC = {"type": "array", "items": _NUM, "minItems": 2}

POLYTOPE = {
    "type": "object",
    "required": ["dim", "vertices"],
    "properties": {
        "dim": {"type": "integer", "minimum": 2},
        "vertices": {"type": "array", "items": _VEC, "minItems": 1},
    },
}

FUZZY_VECTOR = {
    "type": "object",
    "required": ["alpha", "cuts"],
    "properties": {
        "alpha": {"type": "array", "items": _NUM, "minItems": 1},
        "cuts": {"type": "array", "items": POLYTOPE, "minItems": 1},
    },
}

SAMPLER_SPEC = {
    "type": "object",
    "required": ["family", "base"],
    "properties": {"family": {"enum": ["translation", "scaling", "vertex-perturbation"]},
                   "base": FUZZY_VECTOR},
    "oneOf": [
        {
            "properties": {
                "family": {"const": "translation"},
                "law": {"enum": ["gaussian", "uniform"]},
                "mean": _VEC,
                "sigma": {"type": "number", "minimum": 0},
                "half_width": {"type": "number", "minimum": 0},
            }
        },
        {
            "required": ["lambda_min", "lambda_max"],
            "properties": {
                "family": {"const": "scaling"},
                "lambda_min": {"type": "number", "exclusiveMinimum": 0},
                "lambda_max": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        {
            "required": ["noise"],
            "properties": {
                "family": {"const": "vertex-perturbation"},
                "noise": {"type": "number", "minimum": 0},
                "profile": {"type": "array", "items": _NUM},
            },
        },
    ],
}

WALK_CONFIG = {
    "type": "object",
    "required": ["spec", "n", "times"],
    "properties": {
        "spec": SAMPLER_SPEC,
        "n": {"type": "integer", "minimum": 1},
        "times": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
        "pin": {
            "type": "object",
            "properties": {"alpha": _NUM, "u": _VEC},
        },
        "sigma_mode": {
            "oneOf": [
                {"const": "exact"},
                {"type": "object", "required": ["estimated"],
                 "properties": {"estimated": {"type": "integer", "minimum": 2}}},
            ]
        },
        "pilot": {"type": ["integer", "null"], "minimum": 2},
    },
}

FDD_REPORT = {
    "type": "object",
    "required": ["schema_version", "source", "replicates", "seed", "times", "ks", "covariance",
                 "increment_corr", "ecf", "chebyshev", "checks", "passed"],
    "properties": {
        "schema_version": {"const": 1},
        "replicates": {"type": "integer", "minimum": 2},
        "ks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["t", "statistic", "p_proxy"],
                "properties": {"statistic": {"type": "number", "minimum": 0, "maximum": 1}},
            },
        },
        "covariance": {"type": "array", "items": {"type": "array", "items": _NUM}},
        "checks": {
            "type": "array",
            "items": {"type": "object", "required": ["name", "value", "limit", "pass"]},
        },
        "passed": {"type": "boolean"},
    },
}


def validate(obj, schema, what="document"):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        raise InvalidConfig(f"invalid {what}: {exc.message}") from exc
    return obj
