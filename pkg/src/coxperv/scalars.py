"""Exact scalar fields: the rationals and the quadratic field Q(sqrt 5).

Rationals are plain :class:`fractions.Fraction`.  Elements of Q(sqrt 5) are
:class:`QSqrt5` instances, which interoperate with ints and Fractions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


class QSqrt5:
    """The number ``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _lift(x) -> "QSqrt5":
        if isinstance(x, QSqrt5):
            return x
        if isinstance(x, (int, Fraction)):
            return QSqrt5(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return QSqrt5(-self.a, -self.b)

    def __pos__(self):
        return self

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def inverse(self) -> "QSqrt5":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QSqrt5 division by zero")
        return QSqrt5(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(5)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 5 b^2
        if self.a * self.a > 5 * self.b * self.b:
            return sa
        return sb

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QSqrt5({self.a}, {self.b})"

    def __str__(self):
        return format_scalar(self)


SQRT5 = QSqrt5(0, 1)
GOLDEN = QSqrt5(Fraction(1, 2), Fraction(1, 2))


def sign(x) -> int:
    if isinstance(x, QSqrt5):
        return x.sign()
    return (x > 0) - (x < 0)


def _fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Serialize exactly: ``"p/q"`` for rationals, ``"a+b√5"`` otherwise."""
    if isinstance(x, QSqrt5):
        if x.b == 0:
            return _fmt_rational(x.a)
        b = _fmt_rational(abs(x.b))
        op = "+" if x.b > 0 else "-"
        return f"{_fmt_rational(x.a)}{op}{b}√5"
    return _fmt_rational(Fraction(x))


_SQRT5_RE = re.compile(r"^\s*([+-]?[0-9]+(?:/[0-9]+)?)\s*([+-])\s*([0-9]+(?:/[0-9]+)?)\s*(?:\*\s*)?(?:√5|sqrt5)\s*$")
_PURE_SQRT5_RE = re.compile(r"^\s*([+-]?)([0-9]+(?:/[0-9]+)?)?\s*(?:\*\s*)?(?:√5|sqrt5)\s*$")


@dataclass(frozen=True)
class Field:
    """A scalar field tag with coercion and (de)serialization helpers."""

    name: str

    @property
    def zero(self):
        return QSqrt5(0) if self.name == "sqrt5" else Fraction(0)

    @property
    def one(self):
        return QSqrt5(1) if self.name == "sqrt5" else Fraction(1)

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if self.name == "sqrt5":
            return x if isinstance(x, QSqrt5) else QSqrt5(Fraction(x))
        if isinstance(x, QSqrt5):
            if x.b != 0:
                raise ValueError(f"{x} is not rational")
            return x.a
        if isinstance(x, float):
            raise TypeError("floating point scalars are not accepted")
        return Fraction(x)

    def parse(self, s: str):
        s = s.strip()
        m = _SQRT5_RE.match(s)
        if m:
            val = QSqrt5(Fraction(m.group(1)), Fraction(m.group(3)) * (1 if m.group(2) == "+" else -1))
            return self.coerce(val)
        m = _PURE_SQRT5_RE.match(s)
        if m:
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(1) == "-":
                coeff = -coeff
            return self.coerce(QSqrt5(0, coeff))
        if not re.fullmatch(r"[+-]?[0-9]+(?:/[0-9]+)?", s):
            raise ValueError(f"not an exact scalar: {s!r}")
        return self.coerce(Fraction(s))

    def format(self, x) -> str:
        return format_scalar(x)


RATIONAL = Field("rational")
QUADRATIC = Field("sqrt5")


def field_by_name(name: str) -> Field:
    if name in ("rational", "Q"):
        return RATIONAL
    if name in ("sqrt5", "quadratic", "quadratic√5", "Q(sqrt5)"):
        return QUADRATIC
    raise ValueError(f"unknown field {name!r}")
