"""The oscillatory integral ``J(xi) = int exp(i(xi4 phi(x) + xi'.x)) eta(x) dx``.

Evaluation reduces the integral by the shape of ``phi``:

* variables ``phi`` does not use contribute exact factors ``b_hat(xi_i)``;
* ``phi = f0(x_i) + sum_j f_j(x_i) x_j`` integrates the affine variables in
  closed form, leaving one oscillatory integral in ``x_i``;
* ``phi = P(x_i) t^2 + S(x_i) t + R(x_i)`` integrates ``t`` as a Fresnel
  integral (direct quadrature for small ``|P|``, Parseval against
  ``b_hat`` otherwise) inside an outer quadrature in ``x_i``;
* anything else falls back to tensor trapezoid quadrature.

Every quadrature is a trapezoid rule on the bump's support.  The integrands
vanish to infinite order at the ends, so the rule converges faster than any
power once oscillations are resolved.  Errors are estimated by doubling.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..algebra import Polynomial
from ..errors import ToleranceNotMet
from .bump import BumpSpec, profile
from .numeric import NumericPolynomial, polyder, polyval, split_by_power, univariate_coeffs

TABLE_ERROR = 1e-15          # absolute accuracy of the b_hat table (unit radius)
DIRECT_LIMIT = 250.0         # |a| at which the inner Fresnel integral switches to Parseval
BUMP_BAND = 600.0            # b_hat(k) < 1e-12 * b_hat(0) for |k| > BUMP_BAND
_DIRECT_NODES = 2 ** 10
_PARSEVAL_STEP = 0.5
_CHUNK = 2 ** 21
MAX_NODES_1D = 2 ** 24
MAX_NODES_OUTER = 2 ** 16
MAX_NODES_TENSOR = 2 ** 26


@dataclass(frozen=True)
class OscValue:
    value: complex
    error: float
    method: str
    nodes: int = 0


# ---------------------------------------------------------------- trapezoid with doubling


def _nodes_for(rate: float, r: float, lo: int = 256, band: float = BUMP_BAND) -> int:
    """Trapezoid nodes on ``(-r, r)`` whose aliasing frequency clears ``rate`` plus the bump band.

    For a smooth compactly supported integrand the trapezoid error is the
    Fourier transform at multiples of ``2 pi / h``; the factor 2 is margin.
    """
    return _pow2_at_least(2 * r * (rate + band / r) / np.pi, lo)


def _pow2_at_least(n: float, lo: int = 1024) -> int:
    return int(max(lo, 2 ** int(np.ceil(np.log2(max(n, 1.0))))))


def trapezoid_doubling(f: Callable[[np.ndarray], np.ndarray], r: float, n0: int, tol: float,
                       max_nodes: int) -> tuple[complex, float, int]:
    """Trapezoid rule on ``(-r, r)`` (integrand zero at the ends), doubling until converged."""
    n = n0
    h = 2 * r / n
    total = _chunked_sum(f, -r + h * np.arange(1, n), h)
    prev = total * h
    while True:
        n2 = 2 * n
        h2 = 2 * r / n2
        odd = -r + h2 * np.arange(1, n2, 2)
        total = total + _chunked_sum(f, odd, h2)
        cur = total * h2
        err = abs(cur - prev)
        n = n2
        if err <= tol * abs(cur) or err < 1e-300 or 2 * n > max_nodes:
            return complex(cur), float(err), n
        prev = cur


def _chunked_sum(f, x: np.ndarray, h: float) -> complex:
    s = 0j
    for k in range(0, len(x), _CHUNK):
        s += complex(np.sum(f(x[k:k + _CHUNK])))
    return s


def _rate(deriv_coeffs: Sequence[np.ndarray], r: float) -> float:
    x = np.linspace(-r, r, 4097)
    return float(sum(np.max(np.abs(polyval(c, x))) for c in deriv_coeffs))


# ---------------------------------------------------------------- one outer variable


def oscillatory_1d(phase: np.ndarray, amps: Sequence[tuple[np.ndarray, float]], bump: BumpSpec,
                   tol: float = 1e-6, max_nodes: int = MAX_NODES_1D) -> tuple[complex, float, int]:
    """``int exp(i phase(x)) prod b_hat(f(x) + c) b(x) dx`` for polynomial ``phase`` and ``f``."""
    r = bump.radius
    rate = _rate([polyder(phase)] + [polyder(f) * r for f, _ in amps], r)
    n0 = _nodes_for(rate, r)

    def f(x):
        v = np.exp(1j * polyval(phase, x)) * bump.b(x)
        for g, c in amps:
            v = v * bump.ft(polyval(g, x) + c)
        return v

    if n0 > max_nodes:
        raise ToleranceNotMet("1D oscillation too fast for the node budget", nodes=n0)
    return trapezoid_doubling(f, r, n0, tol, max_nodes)


# ---------------------------------------------------------------- inner Fresnel integral


def fresnel_unit(a: np.ndarray, xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``int exp(i(a u^2 + xi u)) b(u) du`` for the unit bump as ``exp(i shift) * amp``.

    Three regimes: no stationary point within reach (zero up to the table
    error), direct quadrature for ``|a| <= DIRECT_LIMIT``, and Parseval
    ``(1/2pi) int b_hat(k) F[exp(i(a u^2 + xi u))](k) dk`` after completing
    the square (``shift = -xi^2/(4a)``).
    """
    a = np.asarray(a, dtype=float)
    xi = np.asarray(xi, dtype=float)
    shift = np.zeros(a.shape)
    amp = np.zeros(a.shape, dtype=complex)
    live = np.abs(xi) - 2 * np.abs(a) <= BUMP_BAND
    direct = live & (np.abs(a) <= DIRECT_LIMIT)
    pars = live & ~direct
    if np.any(direct):
        n = _DIRECT_NODES
        h = 2.0 / n
        u = -1 + h * np.arange(1, n)
        w = profile(u) * h
        idx = np.flatnonzero(direct)
        step = max(1, _CHUNK // n)
        for k in range(0, len(idx), step):
            sl = idx[k:k + step]
            ph = a[sl, None] * (u * u)[None, :] + xi[sl, None] * u[None, :]
            amp[sl] = np.exp(1j * ph) @ w
    if np.any(pars):
        from .bump import _unit_table
        spline = _unit_table()[0]
        kk = np.arange(-BUMP_BAND, BUMP_BAND + _PARSEVAL_STEP / 2, _PARSEVAL_STEP)
        bh = spline(np.abs(kk)) * _PARSEVAL_STEP
        idx = np.flatnonzero(pars)
        step = max(1, _CHUNK // len(kk))
        for k in range(0, len(idx), step):
            sl = idx[k:k + step]
            aa = a[sl]
            s = xi[sl] / (2 * aa)
            ph = s[:, None] * kk[None, :] - (kk * kk)[None, :] / (4 * aa[:, None])
            integral = np.exp(1j * ph) @ bh
            amp[sl] = np.sqrt(np.pi / np.abs(aa)) * np.exp(1j * np.sign(aa) * np.pi / 4) \
                * integral / (2 * np.pi)
            shift[sl] = -xi[sl] ** 2 / (4 * aa)
    return shift, amp


def quadratic_nested(P: np.ndarray, S: np.ndarray, R: np.ndarray, lam: float, xi_outer: float,
                     xi_inner: float, bump: BumpSpec, tol: float = 1e-6,
                     max_nodes: int = MAX_NODES_OUTER) -> tuple[complex, float, int]:
    """``int int exp(i(lam(P t^2 + S t + R) + xi_o x + xi_i t)) b(x) b(t) dt dx``."""
    r = bump.radius

    def parts(x):
        a = lam * polyval(P, x) * r * r
        xi = (lam * polyval(S, x) + xi_inner) * r
        shift, amp = fresnel_unit(a, xi)
        theta = lam * polyval(R, x) + xi_outer * x + shift
        return theta, amp

    x = np.linspace(-r, r, 2049)[1:-1]
    theta, amp = parts(x)
    live = np.abs(amp) > 0
    rate = 0.0
    if np.count_nonzero(live) > 1:
        dth = np.abs(np.diff(theta)) / (x[1] - x[0])
        mask = live[1:] & live[:-1]
        if np.any(mask):
            rate += float(np.max(dth[mask]))
    n0 = _nodes_for(rate, r)
    if n0 > max_nodes:
        raise ToleranceNotMet("outer oscillation too fast for the node budget", nodes=n0)

    def f(xs):
        th, am = parts(xs)
        return np.exp(1j * th) * am * r * bump.b(xs)

    return trapezoid_doubling(f, r, n0, tol, max_nodes)


# ---------------------------------------------------------------- shape detection


def _affine_split(phi: Polynomial, used: list[int]) -> tuple[int, dict] | None:
    """``(i, {j: f_j})`` with ``phi = f_0(x_i) + sum f_j(x_i) x_j`` (key ``-1`` holds ``f_0``)."""
    for i in used:
        parts: dict[int, dict] = {}
        ok = True
        for e, c in phi.terms:
            others = [j for j in range(3) if j != i and e[j]]
            if len(others) > 1 or (others and e[others[0]] > 1):
                ok = False
                break
            key = others[0] if others else -1
            parts.setdefault(key, {})[(e[i],)] = c
        if ok and len(parts) > 1:
            return i, {k: Polynomial(v, 1) for k, v in parts.items()}
    return None


def _quadratic_split(phi: Polynomial, used: list[int]) -> tuple[int, int, dict] | None:
    if len(used) != 2:
        return None
    for i, j in (used, used[::-1]):
        if phi.degree_in(j) <= 2:
            split = split_by_power(phi, j)
            return i, j, {k: univariate_coeffs(v, i) for k, v in split.items()}
    return None


def _uni(p: Polynomial) -> np.ndarray:
    return univariate_coeffs(p, 0)


def eval_oscillatory(phi: Polynomial, bump: BumpSpec, xi: Sequence[float],
                     tol: float = 1e-6) -> OscValue:
    """``J(xi)`` with an absolute error estimate; ``xi = (xi1, xi2, xi3, xi4)``."""
    if len(xi) != 4:
        raise ValueError("frequency vector must have four components")
    xi = [float(v) for v in xi]
    lam = xi[3]
    if max(abs(v) for v in xi) > 1e7:
        raise ToleranceNotMet("frequency beyond the supported range", xi=xi)
    phi = phi if phi.nvars == 3 else phi.embed(3)
    used = [i for i in range(3) if phi.uses_variable(i)] if lam else []
    idle = [i for i in range(3) if i not in used]
    factor = 1.0
    for i in idle:
        factor *= float(bump.ft(xi[i]))
    core_bound = bump.integral_1d ** len(used)
    floor = TABLE_ERROR * bump.radius * bump.integral_1d ** 2 * core_bound
    if abs(factor) * core_bound <= floor:
        return OscValue(0j, floor, "idle-factor-below-floor")
    if not used:
        return OscValue(complex(factor), floor, "exact")
    if len(used) == 1:
        (i,) = used
        phase = np.pad(lam * univariate_coeffs(phi, i), (0, 1))
        phase[1] += xi[i]
        v, e, n = oscillatory_1d(phase, [], bump, tol)
        return OscValue(factor * v, abs(factor) * e + floor, "one-dimensional", n)
    aff = _affine_split(phi, used)
    if aff is not None:
        i, parts = aff
        phase = lam * _uni(parts.get(-1, Polynomial.zero(1)))
        phase = np.pad(phase, (0, max(0, 2 - len(phase))))
        phase[1] += xi[i]
        amps = [(lam * _uni(parts[j]), xi[j]) for j in parts if j >= 0]
        v, e, n = oscillatory_1d(phase, amps, bump, tol)
        return OscValue(factor * v, abs(factor) * e + floor, "affine-reduction", n)
    quad = _quadratic_split(phi, used)
    if quad is not None:
        i, j, c = quad
        zero = np.zeros(1)
        P, S, R = c.get(2, zero), c.get(1, zero), c.get(0, zero)
        if np.any(P):
            v, e, n = quadratic_nested(P, S, R, lam, xi[i], xi[j], bump, tol)
            return OscValue(factor * v, abs(factor) * e + floor, "fresnel-nested", n)
    v, e, n = tensor_quadrature(phi, bump, xi, tol)
    return OscValue(v, e + floor, "tensor", n)


def tensor_quadrature(phi: Polynomial, bump: BumpSpec, xi: Sequence[float],
                      tol: float = 1e-6, max_nodes: int = MAX_NODES_TENSOR) -> tuple[complex, float, int]:
    """Plain tensor trapezoid rule over the support, compared against half the nodes per axis."""
    r = bump.radius
    num = NumericPolynomial(phi)
    grads = [NumericPolynomial(phi.derivative(k)) for k in range(3)]
    g = np.linspace(-r, r, 17)
    X = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1)
    rates = [float(np.max(np.abs(xi[3] * grads[k](X) + xi[k]))) * 1.5 for k in range(3)]
    band = 0.5 * np.log(1 / tol) ** 2          # b_hat(k) ~ exp(-sqrt(2k)) drops below tol here
    ns = [_nodes_for(rt, r, 64, band) for rt in rates]
    if np.prod(ns, dtype=float) > max_nodes:
        raise ToleranceNotMet("tensor quadrature exceeds the node budget", nodes=float(np.prod(ns)))

    def rule(ns):
        axes = [np.linspace(-r, r, n + 1)[1:-1] for n in ns]
        hs = [2 * r / n for n in ns]
        total = 0j
        for a in axes[0]:
            Y = np.stack(np.meshgrid([a], axes[1], axes[2], indexing="ij"), axis=-1)[0]
            ph = xi[3] * num(Y) + xi[0] * a + xi[1] * Y[..., 1] + xi[2] * Y[..., 2]
            w = bump.b(a) * bump.b(Y[..., 1]) * bump.b(Y[..., 2])
            total += complex(np.sum(np.exp(1j * ph) * w))
        return total * hs[0] * hs[1] * hs[2]

    fine = rule(ns)
    coarse = rule([n // 2 for n in ns])
    return fine, abs(fine - coarse), int(np.prod(ns))
