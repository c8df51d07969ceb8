"""Substitutions, derivatives and Hessians of :class:`Polynomial`."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .linalg import LinearMap
from .polynomial import Polynomial, _common_denominator


def derivative(phi: Polynomial, i: int) -> Polynomial:
    """Partial derivative in variable ``i`` (0-based)."""
    return phi.derivative(i)


def substitute(phi: Polynomial, i: int, psi: Polynomial) -> Polynomial:
    """Replace variable ``i`` of ``phi`` by the polynomial ``psi`` (same nvars)."""
    if psi.nvars != phi.nvars:
        raise ValueError("substituted polynomial must have the same nvars")
    if not phi.uses_variable(i):
        return phi
    # group terms by the exponent of x_i, then Horner in psi
    groups: dict[int, dict] = {}
    for e, c in phi.as_dict().items():
        k = e[i]
        rest = e[:i] + (0,) + e[i + 1:]
        groups.setdefault(k, {})[rest] = c
    top = max(groups)
    result = Polynomial.zero(phi.nvars)
    for k in range(top, -1, -1):
        result = result * psi
        if k in groups:
            result = result + Polynomial(groups[k], phi.nvars)
    return result


def _linear_forms(A: LinearMap, nvars: int) -> list[Polynomial]:
    forms = []
    for i in range(nvars):
        forms.append(Polynomial({tuple(int(j == t) for t in range(nvars)): A.entries[i][j]
                                 for j in range(nvars)}, nvars))
    return forms


def compose_linear(phi: Polynomial, A: LinearMap) -> Polynomial:
    """Return ``x -> phi(A x)`` exactly."""
    n = phi.nvars
    if A.n != n:
        raise ValueError(f"matrix size {A.n} does not match nvars {n}")
    if phi.is_zero():
        return phi
    if A.field == 1 and phi.field == 1:
        return _compose_rational(phi, A)
    forms = _linear_forms(A, n)
    return _compose_generic(phi, forms)


def _compose_generic(phi: Polynomial, forms: list[Polynomial]) -> Polynomial:
    n = phi.nvars
    powers = []
    for i in range(n):
        top = phi.degree_in(i)
        tbl = [Polynomial.constant(1, n)]
        for _ in range(top):
            tbl.append(tbl[-1] * forms[i])
        powers.append(tbl)
    cache: dict = {}
    acc: dict = {}
    for e, c in phi.as_dict().items():
        key = e[:-1]
        part = cache.get(key)
        if part is None:
            part = Polynomial.constant(1, n)
            for i, k in enumerate(key):
                if k:
                    part = part * powers[i][k]
            cache[key] = part
        term = part * powers[n - 1][e[-1]] if e[-1] else part
        for te, tc in term.as_dict().items():
            v = acc.get(te)
            acc[te] = tc * c if v is None else v + tc * c
    return Polynomial({e: v for e, v in acc.items() if v}, n)


def _int_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    get = out.get
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    return {e: v for e, v in out.items() if v}


def _compose_rational(phi: Polynomial, A: LinearMap) -> Polynomial:
    # integer linear forms: A = M / den, so phi(Ax) = sum c_a den^-|a| (Mx)^a
    n = phi.nvars
    den = 1
    for row in A.entries:
        for x in row:
            q = Fraction(x).denominator
            den = den * q // gcd(den, q)
    forms = []
    for i in range(n):
        forms.append({tuple(int(j == t) for t in range(n)): int(Fraction(A.entries[i][j]) * den)
                      for j in range(n) if A.entries[i][j]})
    powers = []
    one = {(0,) * n: 1}
    for i in range(n):
        tbl = [one]
        for _ in range(phi.degree_in(i)):
            tbl.append(_int_mul(tbl[-1], forms[i]))
        powers.append(tbl)
    terms = phi.as_dict()
    cden = _common_denominator(terms)
    maxdeg = phi.degree()
    cache: dict = {}
    acc: dict = {}
    get = acc.get
    for e, c in terms.items():
        # scale every term to the common denominator den^maxdeg * cden
        w = int(c * cden) * den ** (maxdeg - sum(e))
        key = e[:-1]
        part = cache.get(key)
        if part is None:
            part = one
            for i, k in enumerate(key):
                if k:
                    part = _int_mul(part, powers[i][k])
            cache[key] = part
        term = _int_mul(part, powers[n - 1][e[-1]]) if e[-1] else part
        for te, tc in term.items():
            acc[te] = get(te, 0) + tc * w
    total_den = cden * den ** maxdeg
    return Polynomial._raw({e: Fraction(v, total_den) for e, v in acc.items() if v}, n)


def hessian(phi: Polynomial) -> list[list[Polynomial]]:
    n = phi.nvars
    first = [phi.derivative(i) for i in range(n)]
    H = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            H[i][j] = H[j][i] = first[i].derivative(j)
    return H


def hessian_det(phi: Polynomial) -> Polynomial:
    """Exact determinant of the matrix of second partials (cofactor expansion)."""
    H = hessian(phi)
    n = phi.nvars
    if n == 1:
        return H[0][0]
    if n == 2:
        return H[0][0] * H[1][1] - H[0][1] * H[1][0]
    a, b, c = H[0]
    _, e, f = H[1]
    i = H[2][2]
    # symmetric: d=b, g=c, h=f
    return a * (e * i - f * f) - b * (b * i - f * c) + c * (b * f - e * c)


def hessian_coefficient_matrices(phi: Polynomial) -> dict:
    """Map monomial gamma -> 3x3 scalar matrix M_gamma with D^2 phi = sum M_gamma x^gamma."""
    H = hessian(phi)
    n = phi.nvars
    out: dict = {}
    for i in range(n):
        for j in range(n):
            for e, c in H[i][j].as_dict().items():
                m = out.setdefault(e, [[Fraction(0)] * n for _ in range(n)])
                m[i][j] = c
    return out


def quadratic_rank_at_origin(phi: Polynomial) -> int:
    """Rank of D^2 phi(0), read from the degree-2 Taylor part."""
    from .linalg import rank

    n = phi.nvars
    M = [[Fraction(0)] * n for _ in range(n)]
    for e, c in phi.homogeneous_part(2).as_dict().items():
        idx = [i for i in range(n) for _ in range(e[i])]
        i, j = idx
        if i == j:
            M[i][i] = 2 * c
        else:
            M[i][j] = M[j][i] = c
    return rank(M)


__all__ = [
    "compose_linear",
    "derivative",
    "hessian",
    "hessian_coefficient_matrices",
    "hessian_det",
    "quadratic_rank_at_origin",
    "substitute",
]
