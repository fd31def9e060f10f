"""Test module for dual-mode numbers."""

from fractions import Fraction
import math

from hypothesis import given
from hypothesis import strategies as st
import pytest

from tridecomp.scalar import NumericMode, QuadraticSurd, format_scalar, parse_scalar, ratio

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def surds():
    return st.builds(QuadraticSurd, rationals, rationals, st.just(21))


def test_ratio():
    """Test ratios in both modes."""
    assert ratio(1, 3, NumericMode.EXACT) == Fraction(1, 3)
    assert ratio(1, 4, NumericMode.FLOAT) == 0.25


def test_threshold_surd():
    """Test (7 - sqrt(21)) / 14 is a root of 7d^2 - 7d + 1 and lies below 1/4."""
    d = QuadraticSurd(Fraction(1, 2), Fraction(-1, 14), 21)
    assert 7 * d * d - 7 * d + 1 == 0
    assert 0 < d < Fraction(1, 4)
    assert float(d) == pytest.approx((7 - math.sqrt(21)) / 14)
    assert 3 * d * (1 - d) / (1 - 2 * d) ** 2 == 1


@given(surds(), surds())
def test_field_operations_match_floats(a, b):
    """Test exact arithmetic agrees with float arithmetic."""
    assert float(a + b) == pytest.approx(float(a) + float(b), abs=1e-9)
    assert float(a * b) == pytest.approx(float(a) * float(b), rel=1e-9, abs=1e-9)
    if b != 0:
        assert (a / b) * b == a


@given(surds(), surds())
def test_ordering_matches_floats(a, b):
    """Test exact comparison agrees with floats away from ties."""
    if abs(float(a) - float(b)) > 1e-9:
        assert (a < b) == (float(a) < float(b))
    assert (a - a).sign() == 0
    assert abs(a) >= 0


def test_surd_errors():
    """Test invalid radicands, mixed fields and division by zero."""
    with pytest.raises(ValueError):
        QuadraticSurd(1, 1, 1)
    with pytest.raises(ValueError):
        QuadraticSurd(1, 1, 21) + QuadraticSurd(1, 1, 5)
    with pytest.raises(ZeroDivisionError):
        QuadraticSurd(1, 1, 21) / QuadraticSurd(0, 0, 21)


def test_mixed_float_arithmetic():
    """Test a surd mixed with a float becomes a float."""
    d = QuadraticSurd(1, 1, 21)
    assert isinstance(d + 0.5, float)
    assert isinstance(0.5 - d, float)


@pytest.mark.parametrize(
    "value, text",
    [(Fraction(1, 3), "1/3"), (Fraction(-2, 5), "-2/5"), (0.25, 0.25),
     (QuadraticSurd(Fraction(1, 2), Fraction(-1, 14), 21), "1/2 + -1/14*sqrt(21)"),
     (QuadraticSurd(1, 0, 21), "1/1"), (QuadraticSurd(Fraction(-3, 4), 0, 21), "-3/4")],
)
def test_format_scalar(value, text):
    """Test exact values become strings and floats stay numbers."""
    assert format_scalar(value) == text


def test_rational_surd_reads_back_as_fraction():
    """Test a surd without irrational part is written and read like a fraction."""
    d = QuadraticSurd(Fraction(1, 2), Fraction(-1, 14), 21)
    value = 7 * d * d - 7 * d + 2
    assert format_scalar(value) == "1/1"
    assert value == parse_scalar(format_scalar(value), NumericMode.EXACT)


def test_parse_scalar():
    """Test fractions and decimals in both modes."""
    assert parse_scalar("1/6", NumericMode.EXACT) == Fraction(1, 6)
    assert parse_scalar("0.17", NumericMode.EXACT) == Fraction(17, 100)
    assert parse_scalar("0.17", NumericMode.FLOAT) == 0.17
    assert parse_scalar(" 1/4 ", NumericMode.FLOAT) == 0.25
    with pytest.raises(ValueError):
        parse_scalar("abc", NumericMode.FLOAT)
