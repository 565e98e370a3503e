"""Canonical text form for exact rationals: "num/den" strings, integer shorthand."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import SchemaError

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/([1-9]\d*))?$")


def parse_rational(raw: Union[int, str], *, canonicalize: bool = False,
                   where: str = "rational") -> Fraction:
    """Parse a JSON int or a "num/den" string into an exact Fraction.

    Non-canonical strings such as "2/4" are rejected unless ``canonicalize``
    is set, in which case they are reduced silently.
    """
    if isinstance(raw, bool):
        raise SchemaError(f"{where}: expected a rational, got a boolean")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        match = _RATIONAL_RE.match(raw)
        if match is None:
            raise SchemaError(f"{where}: {raw!r} is not an integer or num/den rational")
        num = int(match.group(1))
        den = int(match.group(2)) if match.group(2) else 1
        value = Fraction(num, den)
        if not canonicalize and (value.numerator != num or value.denominator != den):
            raise SchemaError(
                f"{where}: {raw!r} is not in lowest terms "
                f"(canonical form is {format_rational(value)!r})"
            )
        return value
    raise SchemaError(f"{where}: expected a rational, got {type(raw).__name__}")


def format_rational(value: Fraction) -> Union[int, str]:
    """Canonical JSON form: a bare int when integral, else "num/den"."""
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"
