"""Sparse exact polynomials in up to three variables ``x1, x2, x3``.

Coefficients are ``Fraction`` or :class:`QuadraticNumber` from a single
field Q(sqrt(D)).  Exponents are tuples of length ``nvars``; variable indices in
the Python API are 0-based (``0`` is ``x1``).
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import (
    FieldMismatchError,
    QuadraticNumber,
    Scalar,
    field_of,
    format_scalar,
    join_fields,
    parse_scalar,
)

MAX_DEGREE = 64
VARIABLES = ("x1", "x2", "x3")

Exponent = tuple


class ParseError(ValueError):
    """Syntax error in polynomial text; ``offset`` is the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.message = message
        self.offset = offset


class DegreeCapError(ValueError):
    """Input polynomial exceeds the supported total degree."""


def _grlex_key(exp: Exponent):
    return (-sum(exp), tuple(-e for e in exp))


def _to_scalar(c) -> Scalar:
    if isinstance(c, QuadraticNumber):
        return c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not exact")
    return Fraction(c)


class Polynomial:
    """Immutable sparse polynomial with no stored zero coefficients."""

    __slots__ = ("_terms", "nvars", "field", "_hash", "_sorted")

    def __init__(self, terms: Mapping[Exponent, object] | Iterable = (), nvars: int = 3):
        if nvars not in (1, 2, 3):
            raise ValueError("nvars must be 1, 2 or 3")
        items = terms.items() if isinstance(terms, Mapping) else terms
        out: dict[Exponent, Scalar] = {}
        d = 1
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for nvars={nvars}")
            c = _to_scalar(c)
            if exp in out:
                c = out[exp] + c
            out[exp] = c
        clean = {}
        for exp, c in out.items():
            if c:
                d = join_fields(d, field_of(c))
                clean[exp] = c
        self._terms = clean
        self.nvars = nvars
        self.field = d
        self._hash = None
        self._sorted = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int, field: int = 1) -> "Polynomial":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p.field = field
        p._hash = None
        p._sorted = None
        return p

    # construction helpers
    @classmethod
    def zero(cls, nvars: int = 3) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int = 3) -> "Polynomial":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = 3) -> "Polynomial":
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw({tuple(exp): Fraction(1)}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Polynomial":
        return cls({tuple(exp): coeff}, len(exp))

    # accessors
    @property
    def terms(self) -> tuple:
        """Terms ``(exponent, coeff)`` in graded-lex order (highest degree first)."""
        if self._sorted is None:
            self._sorted = tuple(sorted(self._terms.items(), key=lambda t: _grlex_key(t[0])))
        return self._sorted

    def as_dict(self) -> dict:
        return dict(self._terms)

    def coeff(self, exp: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(exp), Fraction(0))

    def support(self) -> list:
        return [e for e, _ in self.terms]

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self._terms), default=-1)

    def uses_variable(self, i: int) -> bool:
        return any(e[i] for e in self._terms)

    def constant_term(self) -> Scalar:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial._raw({e: c for e, c in self._terms.items() if sum(e) == k},
                               self.nvars, self.field)

    def is_rational(self) -> bool:
        return self.field == 1

    # ring structure
    def _check(self, other: "Polynomial") -> int:
        if self.nvars != other.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
        return join_fields(self.field, other.field)

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return Polynomial.constant(other, self.nvars)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        f = self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars, _field_of_terms(out, f))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self._terms.items()}, self.nvars, self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Polynomial":
        c = _to_scalar(c)
        if not c:
            return Polynomial.zero(self.nvars)
        f = join_fields(self.field, field_of(c))
        out = {}
        for e, v in self._terms.items():
            w = v * c
            if w:
                out[e] = w
        return Polynomial._raw(out, self.nvars, _field_of_terms(out, f))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        f = self._check(other)
        out = _mul_terms(self._terms, other._terms, f == 1)
        return Polynomial._raw(out, self.nvars, _field_of_terms(out, f))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction, QuadraticNumber)):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.terms))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # calculus and evaluation
    def derivative(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Polynomial._raw(out, self.nvars, self.field if out else 1)

    def evaluate(self, point: Sequence) -> Scalar:
        """Exact value at a point of scalars."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        total: Scalar = Fraction(0)
        pows = [_power_table(x, self.degree_in(i)) for i, x in enumerate(point)]
        for e, c in self._terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * pows[i][k]
            total = total + t
        return total

    def embed(self, nvars: int) -> "Polynomial":
        """View as a polynomial in more variables (trailing ones unused)."""
        if nvars < self.nvars:
            raise ValueError("cannot embed into fewer variables")
        pad = (0,) * (nvars - self.nvars)
        return Polynomial._raw({e + pad: c for e, c in self._terms.items()}, nvars, self.field)

    def restrict(self, nvars: int) -> "Polynomial":
        """Drop trailing variables; they must not occur."""
        if any(any(e[nvars:]) for e in self._terms):
            raise ValueError("polynomial depends on a dropped variable")
        return Polynomial._raw({e[:nvars]: c for e, c in self._terms.items()}, nvars, self.field)

    def permute(self, perm: Sequence[int]) -> "Polynomial":
        """Rename variables: old variable ``i`` becomes new variable ``perm[i]``."""
        out = {}
        for e, c in self._terms.items():
            ne = [0] * self.nvars
            for i, k in enumerate(e):
                ne[perm[i]] = k
            out[tuple(ne)] = c
        return Polynomial._raw(out, self.nvars, self.field)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, nvars={self.nvars})"


def _field_of_terms(terms: dict, hint: int) -> int:
    if hint == 1:
        return 1
    for c in terms.values():
        if isinstance(c, QuadraticNumber):
            return c.d
    return 1


def _power_table(x, n: int) -> list:
    out = [Fraction(1)]
    for _ in range(max(n, 0)):
        out.append(out[-1] * x)
    return out


def _common_denominator(terms: dict) -> int:
    den = 1
    for c in terms.values():
        q = c.denominator
        if den % q:
            den = den * q // math.gcd(den, q)
    return den


def _mul_terms(a: dict, b: dict, rational: bool) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    if rational:
        # integer arithmetic with a common denominator is much faster than Fraction
        da, db = _common_denominator(a), _common_denominator(b)
        ia = [(e, int(c * da)) for e, c in a.items()]
        ib = [(e, int(c * db)) for e, c in b.items()]
        acc: dict = {}
        get = acc.get
        for ea, ca in ia:
            for eb, cb in ib:
                e = tuple(x + y for x, y in zip(ea, eb))
                acc[e] = get(e, 0) + ca * cb
        den = da * db
        return {e: Fraction(v, den) for e, v in acc.items() if v}
    acc = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = acc.get(e)
            acc[e] = ca * cb if v is None else v + ca * cb
    return {e: v for e, v in acc.items() if v}


# ---------------------------------------------------------------- printing


def _monomial_text(exp: Exponent) -> str:
    parts = []
    for i, k in enumerate(exp):
        if k == 1:
            parts.append(VARIABLES[i])
        elif k > 1:
            parts.append(f"{VARIABLES[i]}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text in graded-lex order; ``0`` for the zero polynomial."""
    if p.is_zero():
        return "0"
    out = []
    for idx, (exp, c) in enumerate(p.terms):
        mono = _monomial_text(exp)
        if isinstance(c, QuadraticNumber):
            sign, body = "+", f"({format_scalar(c)})"
            text = f"{body}*{mono}" if mono else body
        else:
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                text = mono if a == 1 else f"{format_scalar(a)}*{mono}"
            else:
                text = format_scalar(a)
        if idx == 0:
            out.append(text if sign == "+" else "-" + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?(?:/\d+(?:\.\d*)?)?)"
    r"|(?P<var>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<paren>\((?:[^()]|\([^()]*\))*\))"
    r"|(?P<op>[-+*^/]))")


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def parse(text: str, nvars: int = 3) -> Polynomial:
    """Parse the polynomial grammar.

    ``term (('+'|'-') term)*`` with ``term = [coeff '*'] var_power ('*' var_power)*``
    or a bare coefficient; ``coeff`` is ``p`` or ``p/q``, or a parenthesised
    quadratic number ``(a+b*sqrt(D))`` as produced by the printer.
    """
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), _byte_offset(text, start)))
        pos = m.end()
    end_offset = _byte_offset(text, n)
    if not toks:
        raise ParseError("empty expression", 0)

    terms: dict[Exponent, Scalar] = {}
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def parse_coeff(tok) -> Scalar:
        kind, val, off = tok
        if kind == "num":
            if "." in val or "e" in val.lower():
                raise ParseError(f"non-rational literal {val!r}", off)
            num, _, den = val.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", off)
            return Fraction(int(num), int(den) if den else 1)
        try:
            return parse_scalar(val[1:-1])
        except ValueError:
            raise ParseError(f"bad parenthesised coefficient {val!r}", off) from None

    def parse_factor() -> list[int]:
        nonlocal i
        t = peek()
        if t is None:
            raise ParseError("expected variable", end_offset)
        kind, val, off = t
        if kind != "var":
            raise ParseError(f"expected variable, got {val!r}", off)
        if val not in VARIABLES[:nvars]:
            allowed = ", ".join(VARIABLES[:nvars])
            raise ParseError(f"unknown variable {val!r} (allowed: {allowed})", off)
        i += 1
        k = 1
        t = peek()
        if t is not None and t[1] == "^":
            i += 1
            t = peek()
            if t is None or t[0] != "num" or not t[1].isdigit():
                raise ParseError("expected non-negative integer exponent",
                                 t[2] if t else end_offset)
            k = int(t[1])
            i += 1
        exp = [0] * nvars
        exp[VARIABLES.index(val)] = k
        return exp

    first = True
    while True:
        sign = 1
        t = peek()
        if t is None:
            raise ParseError("expected term", end_offset)
        if t[0] == "op" and t[1] in "+-":
            sign = -1 if t[1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {t[1]!r}", t[2])
        first = False
        t = peek()
        if t is None:
            raise ParseError("expected term", end_offset)
        coeff: Scalar = Fraction(1)
        exp = [0] * nvars
        if t[0] in ("num", "paren"):
            coeff = parse_coeff(t)
            i += 1
            if peek() is not None and peek()[1] == "*":
                i += 1
                exp = parse_factor()
        elif t[0] == "var":
            exp = parse_factor()
        else:
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        while peek() is not None and peek()[1] == "*":
            i += 1
            exp = [a + b for a, b in zip(exp, parse_factor())]
        key = tuple(exp)
        terms[key] = terms.get(key, Fraction(0)) + sign * coeff
        if peek() is None:
            break
    p = Polynomial(terms, nvars)
    if p.degree() > MAX_DEGREE:
        raise DegreeCapError(f"total degree {p.degree()} exceeds the cap of {MAX_DEGREE}")
    return p


def polynomial_from_json(text: str, nvars: int = 3) -> Polynomial:
    return parse(text, nvars)
