"""Exact small-matrix linear algebra over Q and Q(sqrt(D))."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalars import QuadraticNumber, Scalar, field_of, format_scalar, join_fields

Matrix = list  # list of rows of scalars


def _s(x) -> Scalar:
    return x if isinstance(x, QuadraticNumber) else Fraction(x)


def mat(rows: Sequence[Sequence]) -> Matrix:
    return [[_s(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s: Scalar = Fraction(0)
            for t in range(k):
                if a[i][t] and b[t][j]:
                    s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum((a[i][j] * v[j] for j in range(len(v))), Fraction(0)) for i in range(len(a))]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def row_reduce(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], QuadraticNumber) else m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(row_reduce(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list[list]:
    """Basis of ``{v : a v = 0}``, each vector scaled to coprime integers when rational."""
    if not a:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    cols = len(a[0])
    r, pivots = row_reduce(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v: list = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][f]
        basis.append(primitive(v))
    return basis


def primitive(v: Sequence) -> list:
    """Scale a rational vector to coprime integers with first nonzero entry positive."""
    if any(isinstance(x, QuadraticNumber) for x in v):
        lead = next(x for x in v if x)
        return [x / lead for x in v]
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return [Fraction(0)] * len(v)
    sign = 1 if next(x for x in ints if x) > 0 else -1
    return [Fraction(sign * x // g) for x in ints]


def det(a: Matrix) -> Scalar:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if n == 3:
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    raise ValueError("det implemented for n <= 3")


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    r, piv = row_reduce(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r]


def complete_basis(vectors: Sequence[Sequence], n: int) -> list[list]:
    """Standard basis vectors that, together with ``vectors``, span the space."""
    chosen = [list(v) for v in vectors]
    extra = []
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        if rank(chosen + extra + [e]) > len(chosen) + len(extra):
            extra.append(e)
        if len(chosen) + len(extra) == n:
            break
    return extra


class SingularMatrixError(ValueError):
    """Raised when constructing a LinearMap from a singular matrix."""


class LinearMap:
    """Invertible n x n matrix (n = 2 or 3) acting by ``x -> A x``."""

    __slots__ = ("entries", "n", "det", "field")

    def __init__(self, rows: Sequence[Sequence]):
        self.entries = tuple(tuple(_s(x) for x in row) for row in rows)
        self.n = len(self.entries)
        if any(len(r) != self.n for r in self.entries):
            raise ValueError("matrix must be square")
        f = 1
        for row in self.entries:
            for x in row:
                f = join_fields(f, field_of(x))
        self.field = f
        self.det = det([list(r) for r in self.entries])
        if not self.det:
            raise SingularMatrixError("matrix is singular")

    @classmethod
    def identity(cls, n: int = 3) -> "LinearMap":
        return cls(identity(n))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "LinearMap":
        return cls(transpose([list(c) for c in cols]))

    def rows(self) -> Matrix:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(matmul(self.rows(), other.rows()))

    def inverse(self) -> "LinearMap":
        return LinearMap(inverse(self.rows()))

    def apply(self, v: Sequence) -> list:
        return matvec(self.rows(), list(v))

    def is_identity(self) -> bool:
        return all(self.entries[i][j] == int(i == j) for i in range(self.n) for j in range(self.n))

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(format_scalar(x) for x in r) for r in self.entries)
        return f"LinearMap([{body}])"


LinearMap3 = LinearMap
