"""Float evaluation of exact polynomials."""
from __future__ import annotations

import numpy as np

from ..algebra import Polynomial


class NumericPolynomial:
    """Vectorised evaluator; points have shape (..., nvars)."""

    def __init__(self, p: Polynomial):
        self.nvars = p.nvars
        terms = p.terms
        self.exps = np.array([e for e, _ in terms], dtype=int).reshape(-1, p.nvars)
        self.coeffs = np.array([float(c) for _, c in terms], dtype=float)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1])
        for e, c in zip(self.exps, self.coeffs):
            term = np.full(x.shape[:-1], c)
            for i, k in enumerate(e):
                if k:
                    term = term * x[..., i] ** k
            out = out + term
        return out


def univariate_coeffs(p: Polynomial, var: int) -> np.ndarray:
    """Coefficients (lowest first) of a polynomial that only uses ``var``."""
    deg = p.degree_in(var)
    out = np.zeros(deg + 1)
    for e, c in p.terms:
        if any(k for i, k in enumerate(e) if i != var):
            raise ValueError("polynomial uses other variables")
        out[e[var]] += float(c)
    return out


def split_by_power(p: Polynomial, var: int) -> dict[int, Polynomial]:
    """``p = sum_k p_k * x_var^k`` with ``p_k`` free of ``x_var``."""
    out: dict[int, dict] = {}
    for e, c in p.terms:
        k = e[var]
        rest = e[:var] + (0,) + e[var + 1:]
        out.setdefault(k, {})[rest] = c
    return {k: Polynomial(v, p.nvars) for k, v in out.items()}


def polyval(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.polynomial.polynomial.polyval(x, coeffs)


def polyder(coeffs: np.ndarray) -> np.ndarray:
    return np.polynomial.polynomial.polyder(coeffs) if len(coeffs) > 1 else np.zeros(1)
