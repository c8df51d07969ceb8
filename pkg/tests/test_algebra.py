from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from flatheight.algebra import (
    DegreeCapError,
    FieldMismatchError,
    LinearMap,
    ParseError,
    Polynomial,
    QuadraticNumber,
    SingularMatrixError,
    compose_linear,
    hessian_det,
    parse,
    parse_scalar,
    real_root_multiplicities,
    sqrt_rational,
    substitute,
)
from flatheight.algebra.univariate import evaluate, from_polynomial, squarefree_decomposition

X = sympy.symbols("x1 x2 x3")


def to_sympy(p: Polynomial):
    expr = sympy.Integer(0)
    for e, c in p.terms:
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in zip(X, e):
            term *= v ** k
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, nvars=3):
    poly = sympy.Poly(sympy.expand(expr), *X[:nvars])
    return Polynomial({m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}, nvars)


# ---------------------------------------------------------------- parse / print


def test_parse_single_monomial():
    p = parse("x1^2*x2")
    assert p.as_dict() == {(2, 1, 0): 1}


def test_parse_three_terms():
    p = parse("x1^3 + x1^2*x2 + x1^4*x3")
    assert p.as_dict() == {(3, 0, 0): 1, (2, 1, 0): 1, (4, 0, 1): 1}


def test_parse_coefficient_cancellation():
    assert parse("2/3*x1 - x1").as_dict() == {(1, 0, 0): Fraction(-1, 3)}


def test_printer_graded_lex():
    p = parse("x1^3 + x1^2*x2 + x1^4*x3")
    assert str(p) == "x1^4*x3 + x1^3 + x1^2*x2"
    assert str(parse("-x2 + 3/2*x1^2 - 7")) == "3/2*x1^2 - x2 - 7"
    assert str(Polynomial.zero()) == "0"


@pytest.mark.parametrize("text,offset", [
    ("x1^^2", 3),
    ("1.5*x1", 0),
    ("x1 + x4", 5),
    ("x1 x2", 3),
    ("x1 +", 4),
    ("y", 0),
    ("2/0*x1", 0),
])
def test_parse_errors_report_byte_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_parse_degree_cap():
    parse("x1^64")
    with pytest.raises(DegreeCapError):
        parse("x1^60*x2^5")


def test_parse_respects_nvars():
    with pytest.raises(ParseError):
        parse("x3", nvars=2)
    assert parse("x2^2 - x1", nvars=2).nvars == 2


def test_quadratic_coefficients_round_trip():
    q = QuadraticNumber(1, 2, 3)
    p = Polynomial.var(0).scale(q) + Polynomial.var(1)
    assert parse(str(p)) == p
    assert p.field == 3


# ---------------------------------------------------------------- ring ops


def test_ring_examples():
    x1, x2 = Polynomial.var(0), Polynomial.var(1)
    assert (x1 + x2) * (x1 - x2) == parse("x1^2 - x2^2")
    p = parse("x1^3 - 2/5*x2*x3")
    assert (p + (-p)).is_zero()
    assert (x2 - x1 ** 2) ** 2 == parse("x2^2 - 2*x1^2*x2 + x1^4")


def test_field_mismatch():
    a = Polynomial.constant(sqrt_rational(Fraction(2)))
    b = Polynomial.constant(sqrt_rational(Fraction(3)))
    with pytest.raises(FieldMismatchError):
        a + b


def test_quadratic_scalars():
    r2 = sqrt_rational(Fraction(8))
    assert r2 == QuadraticNumber(0, 2, 2)
    assert r2 * r2 == 8 and isinstance(r2 * r2, Fraction)
    assert QuadraticNumber(1, 1, 2) - QuadraticNumber(0, 1, 2) == 1
    assert parse_scalar("1/2-3*sqrt(5)") == QuadraticNumber(Fraction(1, 2), -3, 5)
    assert QuadraticNumber(1, -1, 2).sign() == -1
    assert QuadraticNumber(-1, 1, 2).sign() == 1
    assert sqrt_rational(Fraction(9, 4)) == Fraction(3, 2)


# ---------------------------------------------------------------- substitutions


def test_compose_linear_examples():
    I = LinearMap.identity()
    swap = LinearMap([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    shear = LinearMap([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert compose_linear(parse("x1^2"), I) == parse("x1^2")
    assert compose_linear(parse("x1^2"), swap) == parse("x2^2")
    assert compose_linear(parse("x1*x2"), shear) == parse("x1*x2 + x1^2")


def test_singular_matrix_rejected():
    with pytest.raises(SingularMatrixError):
        LinearMap([[1, 2, 3], [2, 4, 6], [0, 0, 1]])


def test_substitute_examples():
    assert substitute(parse("x2^2 - 2*x1^2*x2 + x1^4"), 1, parse("x2 + x1^2")) == parse("x2^2")
    assert substitute(parse("x1"), 1, parse("x3^5 + 1")) == parse("x1")
    assert substitute(parse("x1^2*x2"), 1, parse("x2 + x1")) == parse("x1^2*x2 + x1^3")


def test_derivative_examples():
    assert parse("x1^3").derivative(0) == parse("3*x1^2")
    assert parse("x1^2*x2").derivative(2).is_zero()
    assert parse("x1^2*x2^2").derivative(1) == parse("2*x1^2*x2")


def test_hessian_det_examples():
    assert hessian_det(parse("x1^2 + x2^2 + x3^2")) == Polynomial.constant(8)
    assert hessian_det(parse("x1^2*x2^2")).is_zero()
    assert hessian_det(parse("x1^3 + x1^2*x2 + x1^4*x3")).is_zero()


# ---------------------------------------------------------------- property tests

small_rat = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def polynomials(draw, max_deg=4, max_terms=6):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(3))
        if sum(e) <= max_deg:
            terms[e] = draw(small_rat)
    return Polynomial(terms, 3)


@st.composite
def invertible(draw):
    rows = [[draw(st.fractions(min_value=-2, max_value=2, max_denominator=3)) for _ in range(3)]
            for _ in range(3)]
    for shift in (0, 7):
        try:
            return LinearMap([[x + shift * (i == j) for j, x in enumerate(r)]
                              for i, r in enumerate(rows)])
        except SingularMatrixError:
            pass
    return LinearMap.identity()


@settings(max_examples=40, deadline=None)
@given(polynomials())
def test_print_parse_round_trip(p):
    assert parse(str(p)) == p


@settings(max_examples=30, deadline=None)
@given(polynomials(), invertible(), invertible())
def test_compose_is_associative(p, A, B):
    assert compose_linear(compose_linear(p, A), B) == compose_linear(p, A @ B)


@settings(max_examples=30, deadline=None)
@given(polynomials(), invertible())
def test_compose_matches_sympy(p, A):
    subs = {X[i]: sum(sympy.Rational(A.entries[i][j].numerator, A.entries[i][j].denominator) * X[j]
                      for j in range(3)) for i in range(3)}
    expected = from_sympy(to_sympy(p).xreplace(subs))
    assert compose_linear(p, A) == expected


@settings(max_examples=25, deadline=None)
@given(polynomials(max_deg=4), invertible())
def test_hessian_chain_rule(p, A):
    lhs = hessian_det(compose_linear(p, A))
    rhs = compose_linear(hessian_det(p), A).scale(A.det ** 2)
    assert lhs == rhs


@settings(max_examples=25, deadline=None)
@given(polynomials(max_deg=5))
def test_hessian_det_matches_sympy(p):
    expected = from_sympy(sympy.hessian(to_sympy(p), X).det())
    assert hessian_det(p) == expected


@settings(max_examples=40, deadline=None)
@given(polynomials(), st.integers(0, 2), st.integers(0, 2))
def test_mixed_partials_commute(p, i, j):
    assert p.derivative(i).derivative(j) == p.derivative(j).derivative(i)


# ---------------------------------------------------------------- real roots


def _roots(text):
    return [(r.value, r.multiplicity) for r in real_root_multiplicities(parse(text, nvars=1))]


def test_real_roots_examples():
    assert _roots("x1^3 - 3*x1 + 2") == [(-2, 1), (1, 2)]   # (t-1)^2 (t+2)
    assert _roots("x1^2 + 1") == []
    assert _roots("x1^4 - 2*x1^2 + 1") == [(-1, 2), (1, 2)]


def test_irrational_roots_isolated():
    roots = real_root_multiplicities(parse("x1^2 - 2", nvars=1))
    assert len(roots) == 2 and not any(r.is_rational for r in roots)
    for r, sign in zip(roots, (-1, 1)):
        assert r.hi - r.lo <= Fraction(1, 2 ** 32)
        assert r.lo < sign * sympy.sqrt(2) <= r.hi


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        real_root_multiplicities(Polynomial.zero(1))


@st.composite
def rooted_univariates(draw):
    factors = draw(st.lists(st.tuples(st.fractions(min_value=-4, max_value=4, max_denominator=3),
                                      st.integers(1, 3)), min_size=1, max_size=3))
    extra = draw(st.booleans())
    t = Polynomial.var(0, 1)
    p = Polynomial.constant(draw(st.sampled_from([1, -2, Fraction(3, 5)])), 1)
    for r, k in factors:
        p = p * (t - r) ** k
    if extra:
        p = p * (t ** 2 + 1)
    return p, factors


@settings(max_examples=40, deadline=None)
@given(rooted_univariates())
def test_root_multiplicities_recover_factors(data):
    p, factors = data
    expected: dict = {}
    for r, k in factors:
        expected[r] = expected.get(r, 0) + k
    got = {r.value: r.multiplicity for r in real_root_multiplicities(p)}
    assert got == expected


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=7))
def test_squarefree_degrees_sum(coeffs):
    p = [Fraction(c) for c in coeffs]
    while p and not p[-1]:
        p.pop()
    if len(p) < 2:
        return
    parts = squarefree_decomposition(p)
    assert sum(k * (len(s) - 1) for s, k in parts) == len(p) - 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=3, max_size=7))
def test_sign_flips_exactly_at_odd_multiplicity_roots(coeffs):
    poly = Polynomial({(k,): c for k, c in enumerate(coeffs)}, 1)
    if poly.degree() < 1:
        return
    p = from_polynomial(poly)
    roots = real_root_multiplicities(poly)
    if not roots:
        return
    cuts = [roots[0].lo - 1]
    cuts += [(a.hi + b.lo) / 2 for a, b in zip(roots, roots[1:])]
    cuts.append(roots[-1].hi + 1)
    for r, left, right in zip(roots, cuts, cuts[1:]):
        flipped = (evaluate(p, left) > 0) != (evaluate(p, right) > 0)
        assert flipped == (r.multiplicity % 2 == 1)
