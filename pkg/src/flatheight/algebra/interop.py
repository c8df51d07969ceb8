"""Conversion to and from sympy, used for bivariate square-free factorisation."""
from __future__ import annotations

from fractions import Fraction

import sympy

from .polynomial import Polynomial

SYMBOLS = sympy.symbols("x1 x2 x3")


def to_sympy(p: Polynomial):
    if not p.is_rational():
        raise ValueError("sympy conversion is only used for rational polynomials")
    gens = SYMBOLS[:p.nvars]
    terms = {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.as_dict().items()}
    return sympy.Poly.from_dict(terms or {(0,) * p.nvars: 0}, *gens, domain="QQ")


def from_sympy(poly, nvars: int) -> Polynomial:
    poly = sympy.Poly(poly, *SYMBOLS[:nvars], domain="QQ")
    return Polynomial({m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms() if c}, nvars)


def squarefree_factors(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """``p = c * prod f_j^j`` over Q[x]; returns the non-constant ``(f_j, j)``."""
    _, factors = sympy.sqf_list(to_sympy(p))
    return [(from_sympy(f, p.nvars), j) for f, j in factors if f.total_degree() > 0]


def squarefree_part(p: Polynomial) -> Polynomial:
    out = Polynomial.constant(1, p.nvars)
    for f, _ in squarefree_factors(p):
        out = out * f
    return out
