"""JSON report assembly with byte-deterministic serialization."""

from __future__ import annotations

import json
import math
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from ..expr import FunctionExpr
from ..interval import Interval

SCHEMA_VERSION = "1"


def decimal_string(q: Fraction) -> str:
    """17 significant digits in scientific notation."""
    if q == 0:
        return "0.0000000000000000e+0"
    with localcontext() as ctx:
        ctx.prec = 17
        return format(Decimal(q.numerator) / Decimal(q.denominator), ".16e")


def rational(q) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator), "dec": decimal_string(q)}


def number(x):
    """Floats as JSON numbers; infinities as the string "inf" / "-inf"."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def to_json(value):
    """Recursively convert results into JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, int):
        return value
    if isinstance(value, (float, np.floating)):
        return number(value)
    if isinstance(value, np.ndarray):
        return to_json(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, FunctionExpr):
        return value.to_spec()
    if isinstance(value, Interval):
        return str(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def make_report(command: str, inputs: dict, result: dict, seed=None, generator=None) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "result": result,
    }
    if seed is not None:
        report["seed"] = seed
        report["generator"] = generator
    return to_json(report)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def _text_value(v) -> str:
    if isinstance(v, dict) and set(v) == {"num", "den", "dec"}:
        return v["num"] if v["den"] == "1" else f"{v['num']}/{v['den']}"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text_value(v[k])}" for k in sorted(v)) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    return str(v)


def render_text(report: dict) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict) and not set(v) == {"num", "den", "dec"}:
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        else:
            lines.append(f"{prefix}: {_text_value(v)}")

    walk("", report)
    return "\n".join(lines) + "\n"
