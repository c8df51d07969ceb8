"""Exact two-phase simplex over the rationals (Bland's rule).

Used as an independent oracle for Newton-polyhedron membership and distance,
so it deliberately shares no code with the facet enumeration in ``newton``.

The tableau is kept in integers: every row carries its own positive scale
factor, rows are rescaled by their gcd after each pivot, and all comparisons
are done by cross-multiplication.  This is exact and several times faster
than a ``Fraction`` tableau.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _normalize(row: list) -> list:
    g = gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _pivot(T: list, basis: list, r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p < 0:
        row = [-x for x in row]
        p = -p
        T[r] = row
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = _normalize([x * p - f * y for x, y in zip(other, row)])
    basis[r] = c


def _run(T: list, basis: list, allowed: int) -> None:
    """Minimise the objective in the last row; only columns ``< allowed`` may enter."""
    m = len(T) - 1
    while True:
        obj = T[-1]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                rhs = T[i][-1]
                if best is None:
                    best = i
                    continue
                # compare rhs/a with T[best][-1]/T[best][enter]
                lhs = rhs * T[best][enter]
                cur = T[best][-1] * a
                if lhs < cur or (lhs == cur and basis[i] < basis[best]):
                    best = i
        if best is None:
            raise Unbounded()
        _pivot(T, basis, best, enter)


def _int_row(values: Sequence) -> list:
    vals = [Fraction(v) for v in values]
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in vals]


def _integer_rows(A: Sequence[Sequence], b: Sequence) -> tuple[list, list]:
    """Scale each equation to integers with non-negative right-hand side."""
    rows, scales = [], []
    for i in range(len(A)):
        vals = [Fraction(v) for v in A[i]] + [Fraction(b[i])]
        den = 1
        for v in vals:
            den = lcm(den, v.denominator)
        sign = -1 if vals[-1] < 0 else 1
        rows.append([sign * int(v * den) for v in vals])
        scales.append(den)
    return rows, scales


def _phase_one(rows: list, scales: list, n: int) -> tuple[list, list]:
    """Find a feasible basis; ``rows`` are integer ``[a_1..a_n, rhs]`` with rhs >= 0."""
    m = len(rows)
    # artificial variable i has coefficient scales[i], the row's positive scale
    T = [r[:n] + [scales[i] * int(k == i) for k in range(m)] + [r[-1]] for i, r in enumerate(rows)]
    L = 1
    for d in scales:
        L = lcm(L, d)
    obj = [0] * (n + m + 1)
    for i in range(m):
        f = L // scales[i]
        Ti = T[i]
        for j in range(n):
            obj[j] -= f * Ti[j]
        obj[-1] -= f * Ti[-1]
    T.append(_normalize(obj))
    basis = list(range(n, n + m))
    _run(T, basis, n)
    if T[-1][-1] != 0:
        raise Infeasible()
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    return [T[i][:n] + [T[i][-1]] for i in keep], [basis[i] for i in keep]


def minimize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, list]:
    """Minimise ``c.x`` subject to ``A x = b``, ``x >= 0``; returns ``(value, x)``."""
    n = len(c)
    rows, scales = _integer_rows(A, b)
    T2, basis2 = _phase_one(rows, scales, n)
    obj = _int_row(list(c)) + [0]
    for i, bi in enumerate(basis2):
        f = obj[bi]
        if f:
            p = T2[i][bi]
            obj = _normalize([x * p - f * y for x, y in zip(obj, T2[i])])
    T2.append(obj)
    _run(T2, basis2, n)
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis2):
        x[bi] = Fraction(T2[i][-1], T2[i][bi])
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return value, x


def in_polyhedron(points: Sequence[Sequence[int]], t: Sequence) -> bool:
    """Is ``t`` in conv(points) + nonnegative orthant?  (LP feasibility.)"""
    n = len(t)
    m = len(points)
    # variables: lambda_j (m), slack s_i (n);  sum_j lambda_j p_ji + s_i = t_i,  sum lambda = 1
    # integer points, so scaling row i by the denominator of t_i clears it
    rows, scales = [], []
    for i in range(n):
        q = Fraction(t[i])
        den, num = q.denominator, q.numerator
        sign = -1 if num < 0 else 1
        rows.append([sign * den * p[i] for p in points]
                    + [sign * den * int(k == i) for k in range(n)] + [sign * num])
        scales.append(den)
    rows.append([1] * m + [0] * n + [1])
    scales.append(1)
    try:
        _phase_one(rows, scales, m + n)
    except Infeasible:
        return False
    return True


def newton_distance_lp(points: Sequence[Sequence[int]]) -> Fraction:
    """Least ``tau`` with ``(tau, ..., tau)`` in conv(points) + orthant."""
    n = len(points[0])
    m = len(points)
    # variables: lambda (m), slack s (n), tau;  sum_j lambda_j p_ji + s_i - tau = 0
    A = []
    for i in range(n):
        A.append([p[i] for p in points] + [int(k == i) for k in range(n)] + [-1])
    A.append([1] * m + [0] * n + [0])
    b = [0] * n + [1]
    c = [0] * (m + n) + [1]
    value, _ = minimize(c, A, b)
    return value
