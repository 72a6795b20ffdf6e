from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from sigrecover.exact import (
    count_multiplications,
    exact_cbrt,
    format_scalar,
    parse_scalar,
    scalar,
    tally,
)

rationals = st.fractions(max_denominator=10**6).map(mpq)
nonzero = rationals.filter(lambda q: q != 0)


def test_field_examples():
    assert mpq(1, 2) + mpq(1, 3) == mpq(5, 6)
    assert mpq(2, 3) * mpq(3, 2) == 1
    assert mpq(-1) * mpq(-1) == 1


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        mpq(1) / mpq(0)
    with pytest.raises(ZeroDivisionError):
        parse_scalar("1/0")


def test_cbrt_examples():
    assert exact_cbrt(mpq(8, 27)) == mpq(2, 3)
    assert exact_cbrt(-1) == -1
    assert exact_cbrt(2) is None
    assert exact_cbrt(0) == 0
    assert exact_cbrt(mpq(1, 2)) is None
    assert exact_cbrt(mpq(-125, 8)) == mpq(-5, 2)


@given(rationals)
def test_cbrt_round_trip(a):
    assert exact_cbrt(a**3) == a


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(rationals)
def test_canonical_text_round_trip(a):
    text = format_scalar(a)
    assert format_scalar(parse_scalar(text)) == text
    assert parse_scalar(text) == a


@given(rationals)
def test_canonical_form_is_reduced(a):
    assert a.denominator > 0
    assert Fraction(int(a.numerator), int(a.denominator)) == Fraction(text := format_scalar(a))
    assert text == str(Fraction(text))


@pytest.mark.parametrize("text, expected", [("3", "3"), ("-4/6", "-2/3"), (" 10/5 ", "2"), ("0/7", "0")])
def test_parse_canonicalises(text, expected):
    assert format_scalar(parse_scalar(text)) == expected


@pytest.mark.parametrize("bad", ["", "1.5", "a/b", "1/2/3"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_scalar_rejects_float():
    with pytest.raises(TypeError):
        scalar(0.5)


def test_counter_nests():
    tally(5)  # no active counter: ignored
    with count_multiplications() as outer:
        tally(2)
        with count_multiplications() as inner:
            tally(3)
        assert inner.count == 3
    assert outer.count == 5
