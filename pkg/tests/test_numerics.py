"""Exact-arithmetic plumbing: rational parsing, decimal formatting,
dual numbers, precision policy."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from riccati_pade import DualReal, InputError, format_significant, parse_rational
from riccati_pade.errors import PrecisionError
from riccati_pade.numerics import (
    agreement_digits,
    default_precision,
    require_precision,
    to_fraction,
    to_mpf,
)


def test_parse_rational_forms():
    assert parse_rational("3/7") == Fraction(3, 7)
    assert parse_rational("-3/7") == Fraction(-3, 7)
    assert parse_rational("0.1") == Fraction(1, 10)
    assert parse_rational("-2.5e-3") == Fraction(-1, 400)
    assert parse_rational("1e3") == 1000
    assert parse_rational(".5") == Fraction(1, 2)
    assert parse_rational("42") == 42
    assert parse_rational(Fraction(9, 4)) == Fraction(9, 4)
    assert parse_rational(7) == 7


@pytest.mark.parametrize("bad", ["", "x", "1/0", "1.2/3", "1e", "--1", "1.2.3"])
def test_parse_rational_rejects(bad):
    with pytest.raises(InputError):
        parse_rational(bad)


@given(st.fractions())
def test_parse_rational_round_trips_fraction_notation(q):
    assert parse_rational(f"{q.numerator}/{q.denominator}") == q


def test_format_significant_basic():
    assert format_significant(Fraction(1, 3), 5) == "0.33333"
    assert format_significant(Fraction(2, 3), 4) == "0.6667"
    assert format_significant(Fraction(-1, 8), 3) == "-0.125"
    assert format_significant(1060362, 4) == "1060000"
    assert format_significant("1.0603620904841828996", 20) == "1.0603620904841828996"
    assert format_significant(0, 3) == "0.00"


def test_format_significant_round_half_even():
    # ties go to the even digit, both directions
    assert format_significant(Fraction(25, 1000), 1) == "0.02"
    assert format_significant(Fraction(35, 1000), 1) == "0.04"
    assert format_significant(Fraction(-25, 1000), 1) == "-0.02"
    # carry across the leading digit bumps the exponent
    assert format_significant(Fraction(995, 1000), 2) == "1.0"


def test_format_significant_rejects_floats():
    with pytest.raises(InputError):
        format_significant(0.1, 5)
    with pytest.raises(InputError):
        format_significant(Fraction(1, 3), 0)


@given(
    st.fractions(
        min_value=Fraction(-(10**12)), max_value=Fraction(10**12)
    ).filter(lambda q: q != 0),
    st.integers(min_value=1, max_value=25),
)
@settings(max_examples=200)
def test_format_significant_is_correctly_rounded(q, digits):
    text = format_significant(q, digits)
    back = parse_rational(text)
    # error at most half a unit in the last significant place
    scale = abs(q)
    unit = Fraction(1)
    while unit > scale:
        unit /= 10
    while unit * 10 <= scale:
        unit *= 10
    ulp = unit / 10 ** (digits - 1)
    assert abs(back - q) * 2 <= ulp


def test_to_mpf_accepts_exact_types_only():
    with mp.workdps(30):
        third = mpf(1) / 3
    assert to_mpf(Fraction(1, 3), 30) == third
    assert to_mpf("0.25", 30) == mpf("0.25")
    assert to_mpf(4, 30) == 4
    with pytest.raises(InputError):
        to_mpf(0.25, 30)  # binary floats are banned on purpose


def test_to_fraction_is_exact_round_trip():
    with mp.workdps(40):
        x = mpf(1) / 7
    q = to_fraction(x)
    assert to_mpf(q, 40) == x
    assert to_fraction(Fraction(3, 4)) == Fraction(3, 4)
    with pytest.raises(InputError):
        to_fraction(0.5)


def test_agreement_digits():
    with mp.workdps(30):
        assert agreement_digits(mpf(1), mpf(1)) == 30
        assert agreement_digits(mpf("1.0000001"), mpf(1)) == 7
        assert agreement_digits(mpf(2), mpf(1)) == 0


def test_default_precision_floor_and_growth():
    assert default_precision(2) == 40
    assert default_precision(11) == 64
    assert default_precision(20) == 100
    with pytest.raises(PrecisionError):
        require_precision(3)


def _dual(value, de, dp):
    return DualReal(value, de, dp)


def test_dualreal_product_rule():
    with mp.workdps(30):
        x = DualReal.energy(mpf(3))
        y = _dual(mpf(5), mpf(0), mpf(1))
        z = x * y
        assert z.value == 15
        assert z.d_energy == 5
        assert z.d_param == 3


def test_dualreal_quotient_and_sub():
    with mp.workdps(30):
        x = DualReal.energy(mpf(2))
        q = (x * x - DualReal.constant(1)) / x
        # d/dE (E - 1/E) = 1 + 1/E^2
        assert abs(q.value - mpf("1.5")) < mpf("1e-25")
        assert abs(q.d_energy - mpf("1.25")) < mpf("1e-25")


@given(
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=-50, max_value=50).filter(lambda b: b != 0),
)
def test_dualreal_matches_polynomial_derivative(a, b):
    # p(E) = (E - a)^2 * b has p'(E) = 2 b (E - a); check at E = a + 3
    with mp.workdps(30):
        e = DualReal.energy(mpf(a + 3))
        p = (e - DualReal.constant(a)) * (e - DualReal.constant(a)) * DualReal.constant(b)
        assert p.value == 9 * b
        assert p.d_energy == 6 * b
        assert p.d_param == 0


def test_dualreal_rejects_floats():
    with pytest.raises(InputError):
        DualReal(0.5)
