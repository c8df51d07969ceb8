"""Truncated univariate power series over Q (lists of Fractions, lowest order first)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Series = list


def truncate(a: Sequence, n: int) -> Series:
    out = [Fraction(x) for x in a[:n]]
    return out + [Fraction(0)] * (n - len(out))


def add(a: Series, b: Series) -> Series:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def mul(a: Series, b: Series, n: int) -> Series:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            lim = n - i
            for j, y in enumerate(b[:lim]):
                if y:
                    out[i + j] += x * y
    return out


def inverse(a: Series, n: int) -> Series:
    """Multiplicative inverse mod x^n (requires a[0] != 0)."""
    if not a or a[0] == 0:
        raise ZeroDivisionError("series is not a unit")
    out = [Fraction(0)] * n
    out[0] = 1 / Fraction(a[0])
    for k in range(1, n):
        s = Fraction(0)
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                s += a[j] * out[k - j]
        out[k] = -s * out[0]
    return out


def horner(coeffs: Sequence[Series], z: Series, n: int) -> Series:
    """Evaluate ``sum_j coeffs[j](x) z(x)^j`` mod x^n."""
    acc = [Fraction(0)] * n
    for c in reversed(coeffs):
        acc = add(mul(acc, z, n), truncate(c, n))
    return acc
