import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rkhs_adjoint.scalar import format_scalar, parse_scalar, to_float, to_scalar

rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**9)


def test_arithmetic_examples():
    assert Fraction(1, 2) + Fraction(1, 3) == Fraction(5, 6)
    assert Fraction(3, 2) * Fraction(2, 3) == 1
    assert Fraction(7, 3) - Fraction(7, 3) == 0


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Fraction(1, 3) / Fraction(0)


def test_text_form():
    assert format_scalar(Fraction(5, 6)) == "5/6"
    assert format_scalar(Fraction(4, 2)) == "2"
    assert format_scalar(Fraction(-3, 2)) == "-3/2"
    assert parse_scalar(" 6/4 ") == Fraction(3, 2)
    assert parse_scalar("-7") == -7
    for bad in ("", "1/", "a", "1.5"):
        with pytest.raises(ValueError):
            parse_scalar(bad)
    with pytest.raises(ZeroDivisionError):
        parse_scalar("1/0")


def test_to_scalar_rejects_floats():
    with pytest.raises(TypeError):
        to_scalar(0.5)
    assert to_scalar("2/4") == Fraction(1, 2)


def test_to_float():
    assert to_float(Fraction(1, 3)) == 1 / 3
    assert to_float(Fraction(0)) == 0.0
    assert to_float(Fraction(10**40)) == 1e40
    assert to_float(Fraction(10**400)) == math.inf
    assert to_float(Fraction(-(10**400))) == -math.inf


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * (1 / a) == 1


@given(rationals)
def test_canonical_round_trip(a):
    b = parse_scalar(format_scalar(a))
    assert b == a
    assert (b.numerator, b.denominator) == (a.numerator, a.denominator)
    assert b.denominator > 0 and math.gcd(b.numerator, b.denominator) == 1
