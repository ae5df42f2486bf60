"""JSON schemas for CLI inputs and reports."""

from __future__ import annotations

import jsonschema

_NUMBER = {"type": "number"}
_EXACT = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_REAL = {"oneOf": [_NUMBER, _EXACT]}
_COMPLEX = {
    "type": "object",
    "properties": {"re": _REAL, "im": _REAL},
    "required": ["re", "im"],
    "additionalProperties": False,
}
_SCALAR = {"oneOf": [_REAL, _COMPLEX]}

STEP_FUNCTION = {
    "type": "object",
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "cells": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "lo": {"type": "array", "items": _NUMBER, "minItems": 1},
                    "hi": {"type": "array", "items": _NUMBER, "minItems": 1},
                    "re": _NUMBER,
                    "im": _NUMBER,
                },
                "required": ["lo", "hi"],
            },
        },
    },
    "required": ["dim", "cells"],
}

SAMPLED_FUNCTION = {
    "type": "object",
    "properties": {
        "dim": {"const": 1},
        "lo": _NUMBER,
        "hi": _NUMBER,
        "n": {"type": "integer", "minimum": 1},
        "values": {
            "type": "array",
            "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
        },
        "supnorm_hint": _NUMBER,
    },
    "required": ["lo", "hi", "n", "values"],
}

FUNCTION = {"oneOf": [STEP_FUNCTION, SAMPLED_FUNCTION]}

WORD = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"op": {"enum": ["B*", "B", "N"]}, "f": STEP_FUNCTION},
        "required": ["op", "f"],
    },
}

KERNEL_VALUE = {
    "type": "object",
    "properties": {
        "value": _COMPLEX,
        "abs_log_bound": _NUMBER,
        "error_estimate": _NUMBER,
    },
    "required": ["value", "abs_log_bound", "error_estimate"],
}

SERIES_DIAGNOSTICS = {
    "type": "object",
    "properties": {
        "partial_sums": {"type": "array", "items": _SCALAR},
        "closed_form": {"oneOf": [{"type": "null"}, KERNEL_VALUE]},
        "residuals": {"type": "array", "items": _NUMBER},
        "verdict": {"enum": ["Converged", "Diverging", "Undetermined"]},
        "domain_violation": {"type": "boolean"},
    },
    "required": ["partial_sums", "closed_form", "residuals", "verdict"],
}

VERIFICATION_REPORT = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {"type": "array", "items": {"type": "array"}},
        "values": {"type": "object"},
        "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "passed": {"type": "boolean"},
    },
    "required": ["name", "columns", "rows", "checks", "passed"],
}

GRAM_REPORT = {
    "type": "object",
    "properties": {
        "matrix": {"type": "array", "items": {"type": "array", "items": _COMPLEX}},
        "psd_shift": {"oneOf": [{"type": "null"}, _NUMBER]},
        "hermitian": {"type": "boolean"},
        "verdict": {"type": "boolean"},
    },
    "required": ["matrix", "psd_shift", "verdict"],
}

MOMENT = {
    "type": "object",
    "properties": {"value": _SCALAR, "numeric_mode": {"enum": ["rational", "float"]}},
    "required": ["value"],
}

ERROR = {
    "type": "object",
    "properties": {"error": {"type": "string"}, "message": {"type": "string"}},
    "required": ["error", "message"],
}

OUTPUTS = {
    "kernel": KERNEL_VALUE,
    "moment": MOMENT,
    "verify": SERIES_DIAGNOSTICS,
    "probe": SERIES_DIAGNOSTICS,
    "gram": GRAM_REPORT,
    "approx": VERIFICATION_REPORT,
    "exchange": VERIFICATION_REPORT,
    "error": ERROR,
}


class SchemaError(ValueError):
    """Input JSON that does not match its schema; the message names the field."""


def validate(instance, schema, what: str) -> None:
    errors = list(jsonschema.Draft202012Validator(schema).iter_errors(instance))
    if not errors:
        return
    err = jsonschema.exceptions.best_match(errors)
    path = "/".join(str(p) for p in err.absolute_path) or "<root>"
    raise SchemaError(f"{what}: field {path}: {err.message}")
