"""Exact rational scalars.

All core arithmetic runs on :class:`fractions.Fraction`, which already keeps
numerator/denominator in lowest terms with a positive denominator. This module
only adds the text form used by the CLI and JSON reports and a float bridge.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected: letting them in would silently break exactness.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def parse_scalar(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_scalar(x: Fraction) -> str:
    """Text form "p/q", with "/q" dropped when q == 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_float(x: Fraction) -> float:
    """Nearest float; values beyond the float range become +/-inf."""
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf
