"""Dense univariate polynomials over Q: gcd, square-free decomposition, Sturm isolation.

A dense polynomial is a list of ``Fraction`` coefficients, lowest degree first,
with no trailing zeros (the zero polynomial is ``[]``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .polynomial import Polynomial

Dense = list


def trim(p: Sequence) -> Dense:
    p = [Fraction(c) for c in p]
    while p and not p[-1]:
        p.pop()
    return p


def from_polynomial(q: Polynomial) -> Dense:
    """Coefficients of a polynomial in one variable (any nvars, single variable used)."""
    used = [i for i in range(q.nvars) if q.uses_variable(i)]
    if len(used) > 1:
        raise ValueError("polynomial is not univariate")
    if not q.is_rational():
        raise ValueError("univariate root tools work over Q only")
    v = used[0] if used else 0
    out = [Fraction(0)] * (max(q.degree(), 0) + 1)
    for e, c in q.as_dict().items():
        out[e[v]] = c
    return trim(out)


def to_polynomial(p: Sequence, nvars: int = 1, var: int = 0) -> Polynomial:
    terms = {}
    for k, c in enumerate(p):
        if c:
            e = [0] * nvars
            e[var] = k
            terms[tuple(e)] = c
    return Polynomial(terms, nvars)


def degree(p: Dense) -> int:
    return len(p) - 1


def evaluate(p: Dense, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Dense) -> Dense:
    return trim([k * p[k] for k in range(1, len(p))])


def add(a: Dense, b: Dense) -> Dense:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a: Dense, b: Dense) -> Dense:
    return add(a, [-c for c in b])


def mul(a: Dense, b: Dense) -> Dense:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def divmod_dense(a: Dense, b: Dense) -> tuple[Dense, Dense]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        f = r[-1] / lb
        q[k] = f
        for i, c in enumerate(b):
            r[i + k] -= f * c
        r = trim(r)
    return trim(q), r


def primitive(p: Dense) -> Dense:
    """Integer-coefficient primitive associate with positive leading coefficient."""
    if not p:
        return []
    den = 1
    for c in p:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    s = 1 if ints[-1] > 0 else -1
    return [Fraction(s * c // g) for c in ints]


def monic(p: Dense) -> Dense:
    return [c / p[-1] for c in p]


def gcd_dense(a: Dense, b: Dense) -> Dense:
    a, b = primitive(a), primitive(b)
    while b:
        _, r = divmod_dense(a, b)
        a, b = b, primitive(r)
    return primitive(a) if a else []


def squarefree_decomposition(p: Dense) -> list[tuple[Dense, int]]:
    """Yun's algorithm: ``p = c * prod s_k^k`` with pairwise coprime square-free ``s_k``.

    Returns the non-constant factors ``(s_k, k)`` as primitive integer polynomials.
    """
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial has no square-free decomposition")
    out = []
    dp = derivative(p)
    a0 = gcd_dense(p, dp)
    if len(a0) <= 1:
        return [(primitive(p), 1)] if len(p) > 1 else []
    b = divmod_dense(p, a0)[0]
    c = divmod_dense(dp, a0)[0]
    d = sub(c, derivative(b))
    k = 1
    while len(b) > 1:
        a = gcd_dense(b, d)
        if len(a) > 1:
            out.append((primitive(a), k))
        b = divmod_dense(b, a)[0]
        c = divmod_dense(d, a)[0]
        d = sub(c, derivative(b))
        k += 1
    return out


def _positive_content_part(p: Dense) -> Dense:
    # like primitive() but keeps the sign, which Sturm sequences depend on
    q = primitive(p)
    return q if (q[-1] > 0) == (p[-1] > 0) else [-c for c in q]


def sturm_sequence(p: Dense) -> list[Dense]:
    seq = [primitive(p), primitive(derivative(p))]
    while len(seq[-1]) > 1:
        _, r = divmod_dense(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_positive_content_part([-c for c in r]))
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_changes(seq: list[Dense], x) -> int:
    signs = [_sign(evaluate(s, x)) for s in seq]
    signs = [s for s in signs if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(seq: list[Dense], lo, hi) -> int:
    """Number of distinct real roots in ``(lo, hi]``."""
    return sign_changes(seq, lo) - sign_changes(seq, hi)


def cauchy_bound(p: Dense) -> Fraction:
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RealRoot:
    """A real root: exact ``value`` when rational, else an isolating interval ``(lo, hi)``."""

    multiplicity: int
    lo: Fraction
    hi: Fraction
    value: Fraction | None = None

    @property
    def is_rational(self) -> bool:
        return self.value is not None

    def approx(self) -> float:
        return float(self.value) if self.value is not None else float((self.lo + self.hi) / 2)


def isolate_real_roots(p: Dense, width: Fraction = Fraction(1, 2 ** 32)) -> list[tuple]:
    """Isolate the real roots of a square-free ``p``.

    Returns ``(lo, hi, value)`` triples sorted by position; ``value`` is the exact
    root when it is rational, otherwise ``None`` and ``hi - lo <= width``.
    """
    p = primitive(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    B = cauchy_bound(p)
    lc = abs(int(p[-1]))
    # rationals with denominator <= lc are at least 1/lc^2 apart
    sep = Fraction(1, 2 * lc * lc)
    target = min(width, sep)
    stack = [(-B, B)]
    found = []
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            found.append(_refine(p, seq, lo, hi, target, lc))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    found.sort(key=lambda t: t[0])
    return found


def _refine(p: Dense, seq, lo: Fraction, hi: Fraction, target: Fraction, lc: int):
    # invariant: exactly one root in (lo, hi]
    if evaluate(p, hi) == 0:
        return (hi, hi, hi)
    while hi - lo > target:
        mid = (lo + hi) / 2
        v = evaluate(p, mid)
        if v == 0:
            return (mid, mid, mid)
        if count_roots(seq, lo, mid):
            hi = mid
        else:
            lo = mid
    cand = ((lo + hi) / 2).limit_denominator(lc)
    if lo < cand <= hi and evaluate(p, cand) == 0:
        return (cand, cand, cand)
    return (lo, hi, None)


def real_root_multiplicities(q: Polynomial | Dense,
                             width: Fraction = Fraction(1, 2 ** 32)) -> list[RealRoot]:
    """Real roots of ``q`` with multiplicities, sorted increasingly."""
    p = from_polynomial(q) if isinstance(q, Polynomial) else trim(q)
    if not p:
        raise ValueError("zero polynomial")
    roots = []
    for s, k in squarefree_decomposition(p):
        for lo, hi, val in isolate_real_roots(s, width):
            roots.append(RealRoot(k, lo, hi, val))
    roots.sort(key=lambda r: (r.lo, r.hi))
    return roots


def max_real_multiplicity(q: Polynomial | Dense) -> int:
    roots = real_root_multiplicities(q)
    return max((r.multiplicity for r in roots), default=0)


def order_at_zero(p: Dense) -> int:
    """Multiplicity of 0 as a root (``inf`` handled by callers for the zero polynomial)."""
    for k, c in enumerate(p):
        if c:
            return k
    raise ValueError("zero polynomial")
