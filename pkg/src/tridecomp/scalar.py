"""Dual-mode numbers: binary floats, exact rationals and exact quadratic surds.

Graph weights are rationals whose denominators are products of clique
extension counts, so ``fractions.Fraction`` gives exact answers for small
graphs. The degree threshold itself is irrational; :class:`QuadraticSurd`
represents numbers of the form ``a + b * sqrt(r)`` with rational ``a`` and
``b`` so that the closed-form optimum can be checked exactly as well.
"""

from enum import Enum
from fractions import Fraction
from typing import TypeAlias, Union

Rational: TypeAlias = Union[int, Fraction]


class NumericMode(str, Enum):
    """Interface for numeric mode enumerator."""

    FLOAT = "float"
    EXACT = "exact"


def ratio(numerator: int, denominator: int, mode: NumericMode):
    """Return ``numerator / denominator`` in the requested mode."""
    if mode == NumericMode.EXACT:
        return Fraction(numerator, denominator)
    return numerator / denominator


class QuadraticSurd:
    """Exact element ``rational + irrational * sqrt(radicand)`` of Q(sqrt(r)).

    Example
    =======

    >>> d = QuadraticSurd(Fraction(1, 2), Fraction(-1, 14), 21)
    >>> 7 * d * d - 7 * d + 1
    QuadraticSurd(0, 0, 21)
    """

    __slots__ = ("rational", "irrational", "radicand")

    def __init__(self, rational: Rational = 0, irrational: Rational = 0, radicand: int = 21):
        if radicand <= 1:
            msg = f"{radicand=} must be an integer greater than one."
            raise ValueError(msg)
        self.rational = Fraction(rational)
        self.irrational = Fraction(irrational)
        self.radicand = radicand

    def _coerce(self, other) -> "QuadraticSurd | None":
        if isinstance(other, QuadraticSurd):
            if other.radicand != self.radicand:
                msg = f"cannot mix sqrt({self.radicand}) and sqrt({other.radicand})"
                raise ValueError(msg)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd(other, 0, self.radicand)
        return None

    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticSurd(
            self.rational + o.rational, self.irrational + o.irrational, self.radicand
        )

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.rational, -self.irrational, self.radicand)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, float):
            return float(self) - other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        if isinstance(other, float):
            return other - float(self)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticSurd(
            self.rational * o.rational + self.irrational * o.irrational * self.radicand,
            self.rational * o.irrational + self.irrational * o.rational,
            self.radicand,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        """Return ``rational - irrational * sqrt(radicand)``."""
        return QuadraticSurd(self.rational, -self.irrational, self.radicand)

    def norm(self) -> Fraction:
        """Field norm, the product with the conjugate."""
        return self.rational**2 - self.irrational**2 * self.radicand

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.norm()
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        num = self * o.conjugate()
        return QuadraticSurd(num.rational / norm, num.irrational / norm, self.radicand)

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return 1 / (self**-exponent)
        result = QuadraticSurd(1, 0, self.radicand)
        for _ in range(exponent):
            result = result * self
        return result

    def sign(self) -> int:
        """Exact sign of the number: -1, 0 or +1."""
        a, b = self.rational, self.irrational
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # Opposite signs: compare a^2 with b^2 * r.
        diff = a * a - b * b * self.radicand
        if a > 0:
            return (diff > 0) - (diff < 0)
        return (diff < 0) - (diff > 0)

    def _compare(self, other) -> int:
        if isinstance(other, float):
            value = float(self)
            return (value > other) - (value < other)
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadraticSurd with {type(other).__name__}")
        return (self - o).sign()

    def __eq__(self, other):
        if not isinstance(other, (QuadraticSurd, int, Fraction, float)):
            return NotImplemented
        return self._compare(other) == 0

    def __lt__(self, other):
        return self._compare(other) < 0

    def __le__(self, other):
        return self._compare(other) <= 0

    def __gt__(self, other):
        return self._compare(other) > 0

    def __ge__(self, other):
        return self._compare(other) >= 0

    def __hash__(self):
        if self.irrational == 0:
            return hash(self.rational)
        return hash((self.rational, self.irrational, self.radicand))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.rational) + float(self.irrational) * self.radicand**0.5

    def __repr__(self):
        return f"QuadraticSurd({self.rational}, {self.irrational}, {self.radicand})"

    def __str__(self):
        return f"{self.rational} + {self.irrational}*sqrt({self.radicand})"


Scalar: TypeAlias = Union[float, Fraction, QuadraticSurd]


def format_scalar(value) -> float | str:
    """Serialize a scalar: floats stay numbers, exact values become strings."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, QuadraticSurd):
        if value.irrational == 0:
            return format_scalar(value.rational)
        return str(value)
    return float(value)


def parse_scalar(text: str, mode: NumericMode):
    """Parse ``"p/q"`` or a decimal literal into a scalar of the given mode."""
    text = text.strip()
    try:
        value = Fraction(text)
    except ValueError as exc:
        msg = f"cannot read {text!r} as a number"
        raise ValueError(msg) from exc
    if mode == NumericMode.EXACT:
        return value
    return float(value) if "/" in text else float(text)
