"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt(D)).

Rationals are plain :class:`fractions.Fraction`.  Quadratic irrationals are
:class:`QuadraticNumber`; every operation that produces a zero irrational
part demotes the result back to a ``Fraction`` so that rational values have a
single canonical representation.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from sympy.ntheory import factorint


class FieldMismatchError(ValueError):
    """Raised when combining elements of two different quadratic fields."""


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free (``n > 0``)."""
    if n <= 0:
        raise ValueError("n must be positive")
    s, d = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational ``a, b`` and square-free ``d > 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if d <= 1:
            raise ValueError("d must be a square-free integer > 1")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    @staticmethod
    def make(a, b, d: int) -> "Scalar":
        a, b = Fraction(a), Fraction(b)
        if b == 0 or d == 1:
            return a + b if d == 1 else a
        return QuadraticNumber(a, b, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise FieldMismatchError(
                    f"cannot combine Q(sqrt({self.d})) with Q(sqrt({other.d}))")
            return other.a, other.b
        if isinstance(other, (int, Fraction, Rational)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticNumber.make(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticNumber.make(self.a - c[0], self.b - c[1], self.d)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticNumber.make(c[0] - self.a, c[1] - self.b, self.d)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return QuadraticNumber.make(self.a * a + self.b * b * self.d,
                                    self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticNumber):
            return self * other.inverse()
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticNumber.make(self.a / c[0], self.b / c[0], self.d)

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self.inverse() * c[0]

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out: Scalar = Fraction(1)
        base: Scalar = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def sign(self) -> int:
        """Exact sign of the real number ``a + b*sqrt(d)``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, QuadraticNumber]


def field_of(x) -> int:
    """1 for rationals, ``d`` for elements of Q(sqrt(d))."""
    return x.d if isinstance(x, QuadraticNumber) else 1


def join_fields(d1: int, d2: int) -> int:
    if d1 == 1:
        return d2
    if d2 == 1 or d1 == d2:
        return d1
    raise FieldMismatchError(f"Q(sqrt({d1})) and Q(sqrt({d2})) are different fields")


def sqrt_rational(q: Fraction) -> Scalar:
    """Exact square root of a non-negative rational in Q or Q(sqrt(D))."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational is not real")
    if q == 0:
        return Fraction(0)
    # sqrt(p/r) = sqrt(p*r)/r
    s, d = squarefree_decompose(q.numerator * q.denominator)
    coeff = Fraction(s, q.denominator)
    if d == 1:
        return coeff
    return QuadraticNumber(0, coeff, d)


def scalar_sign(x: Scalar) -> int:
    if isinstance(x, QuadraticNumber):
        return x.sign()
    return (x > 0) - (x < 0)


def format_scalar(x: Scalar) -> str:
    """Canonical text: ``p/q`` (or ``p``) for rationals, ``a+b*sqrt(d)`` otherwise."""
    if isinstance(x, QuadraticNumber):
        b = x.b
        sb = "" if abs(b) == 1 else f"{_frac(abs(b))}*"
        op = "+" if b > 0 else "-"
        if x.a == 0:
            return f"{'-' if b < 0 else ''}{sb}sqrt({x.d})"
        return f"{_frac(x.a)}{op}{sb}sqrt({x.d})"
    return _frac(Fraction(x))


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_RAT = r"[+-]?\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*(?:(?P<a>{_RAT})\s*(?P<op>[+-])\s*)?(?P<neg>-)?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?"
    r"sqrt\(\s*(?P<d>\d+)\s*\)\s*$")


def parse_scalar(text: str) -> Scalar:
    """Parse ``p``, ``p/q`` or ``a+b*sqrt(d)`` (the format of :func:`format_scalar`)."""
    t = text.strip()
    if re.fullmatch(_RAT, t):
        return Fraction(t)
    m = _QUAD_RE.match(t)
    if not m:
        raise ValueError(f"not an exact scalar: {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("op") == "-" or m.group("neg"):
        b = -b
    s, d = squarefree_decompose(int(m.group("d")))
    return QuadraticNumber.make(a, b * s, d)


def scalar_to_json(x: Scalar):
    """Rationals become ``"p/q"`` strings; quadratic numbers ``["a", "b", d]`` triples."""
    if isinstance(x, QuadraticNumber):
        return [_frac(x.a), _frac(x.b), x.d]
    return _frac(Fraction(x))


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, list):
        a, b, d = obj
        return QuadraticNumber.make(Fraction(a), Fraction(b), int(d))
    return Fraction(obj)
