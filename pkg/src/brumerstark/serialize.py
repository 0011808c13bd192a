"""Exact JSON encoding: integers as decimal strings, rationals as "num/den"."""

from __future__ import annotations

import json
from fractions import Fraction


def encode(x):
    """Recursively turn exact values into JSON-ready data with string numbers."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if hasattr(x, "to_json"):
        return encode(x.to_json())
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(x) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(encode(x), sort_keys=True, indent=2) + "\n"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


__all__ = ["dumps", "encode", "parse_rational"]
