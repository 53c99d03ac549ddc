from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ehrhart_forge.errors import InvalidInputError
from ehrhart_forge.rationals import make_rational, parse_rational, rat_str


def test_gcd_reduction():
    assert make_rational(6, 4) == Fraction(3, 2)


def test_sign_normalization():
    r = make_rational(1, -2)
    assert r == Fraction(-1, 2)
    assert r.denominator == 2 and r.numerator == -1


def test_zero_canonical():
    r = make_rational(0, 5)
    assert (r.numerator, r.denominator) == (0, 1)


def test_zero_denominator_rejected():
    with pytest.raises(InvalidInputError):
        make_rational(1, 0)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6).filter(lambda d: d != 0))
def test_make_rational_idempotent(num, den):
    r = make_rational(num, den)
    again = make_rational(r.numerator, r.denominator)
    assert again == r
    assert r.denominator > 0
    from math import gcd

    assert gcd(abs(r.numerator), r.denominator) == 1


@given(
    st.integers(-100, 100),
    st.integers(1, 50),
    st.integers(-100, 100),
    st.integers(1, 50),
)
def test_exact_addition_two_ways(a, b, c, d):
    x, y = Fraction(a, b), Fraction(c, d)
    assert x + y == Fraction(a * d + c * b, b * d)


def test_parse_and_format():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("7") == Fraction(7)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("−3") == Fraction(-3)
    assert rat_str(Fraction(-1, 2)) == "-1/2"
    assert rat_str(Fraction(3)) == "3/1"
    with pytest.raises(InvalidInputError):
        parse_rational("a/b")
