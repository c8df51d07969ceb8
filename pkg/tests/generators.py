"""Random instances shared by the structure tests and the acceptance suite."""
from fractions import Fraction

from flatheight.algebra import LinearMap, Polynomial
from flatheight.structure import FORM, ONE_VAR, TWO_VAR


def _random_rational(rng):
    return Fraction(rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]), rng.randint(1, 3))


def _random_univariate(rng, lo, hi):
    terms = {(k,): _random_rational(rng) for k in range(lo, hi + 1) if rng.random() < 0.7}
    return Polynomial(terms or {(lo,): 1}, 1)


def random_matrix(rng):
    while True:
        try:
            return LinearMap([[Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(3)]
                              for _ in range(3)])
        except ValueError:
            continue


def canonical_instance(rng, kind):
    x2, x3 = Polynomial.var(1), Polynomial.var(2)
    x1 = Polynomial.var(0)
    if kind == ONE_VAR:
        nu = rng.randint(2, 8)
        return x1 ** nu * _random_univariate(rng, 0, 8 - nu).embed(3)
    if kind == TWO_VAR:
        terms = {}
        while len(terms) < 2 or all(e[1] == 0 for e in terms):
            a, b = rng.randint(0, 8), rng.randint(0, 8)
            if 2 <= a + b <= 8:
                terms[(a, b, 0)] = _random_rational(rng)
        return Polynomial(terms, 3)
    Q1, Q2, Q3 = (_random_univariate(rng, 2, 8), _random_univariate(rng, 1, 7),
                  _random_univariate(rng, 1, 7))
    return Q1.embed(3) + Q2.embed(3) * x2 + Q3.embed(3) * x3


def generic_polynomial(rng, degree=4):
    terms = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in range(degree + 1 - a - b):
                if a + b + c >= 2:
                    terms[(a, b, c)] = Fraction(rng.randint(-9, 9))
    return Polynomial(terms, 3)


KINDS = (ONE_VAR, TWO_VAR, FORM)
