from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gencx.scalars import GaussRational, format_gauss, parse_gauss

rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=12
)
gaussians = st.builds(GaussRational, rationals, rationals)


def test_basic_arithmetic():
    a = GaussRational(1, 2)
    b = GaussRational(Fraction(1, 3), -1)
    assert a + b == GaussRational(Fraction(4, 3), 1)
    assert a - b == GaussRational(Fraction(2, 3), 3)
    assert a * b == GaussRational(Fraction(7, 3), Fraction(-1, 3))
    assert -a == GaussRational(-1, -2)
    assert a.conjugate() == GaussRational(1, -2)
    assert (a / a) == 1
    assert bool(GaussRational(0, 0)) is False


def test_int_coercion_both_sides():
    a = GaussRational(0, 1)
    assert 1 + a == GaussRational(1, 1)
    assert 2 * a == GaussRational(0, 2)
    assert 1 - a == GaussRational(1, -1)
    assert 2 / GaussRational(0, 1) == GaussRational(0, -2)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GaussRational(0).inverse()


@pytest.mark.parametrize(
    "text,value",
    [
        ("0", GaussRational(0)),
        ("3/4", GaussRational(Fraction(3, 4))),
        ("i", GaussRational(0, 1)),
        ("-i", GaussRational(0, -1)),
        ("2i", GaussRational(0, 2)),
        ("1/2-3i", GaussRational(Fraction(1, 2), -3)),
        ("-1+1/4i", GaussRational(-1, Fraction(1, 4))),
    ],
)
def test_parse_known_literals(text, value):
    assert parse_gauss(text) == value


@pytest.mark.parametrize("text", ["", "1+2", "i+i", "1+2+3i"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_gauss(text)


@settings(deadline=None)
@given(gaussians)
def test_format_parse_round_trip(x):
    assert parse_gauss(format_gauss(x)) == x


@settings(deadline=None)
@given(gaussians, gaussians, gaussians)
def test_field_identities(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert b * b.inverse() == 1
        assert (a / b) * b == a
