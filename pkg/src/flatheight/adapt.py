"""Adapted coordinates, height and Varchenko exponent.

The 2D engine follows the Newton-polygon iteration: while the principal face
is a compact edge whose principal part has a real root of multiplicity above
the distance, shift that root away with ``x2 <- x2 + t0 x1^m`` (or the mirror
substitution).  A repeated factor whose branch is analytic but not polynomial
would make that loop infinite; it is straightened in one step by a truncated
power-series shift whose Newton polygon is provably exact (see
``_branch_step``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import LinearMap, Polynomial, compose_linear, quadratic_rank_at_origin, substitute
from .algebra import series as ps
from .algebra import univariate as uv
from .algebra.interop import squarefree_part
from .algebra.scalars import QuadraticNumber, Scalar, sqrt_rational
from .errors import AnalysisError, IrrationalRoot, IterationCapExceeded, NonIntegerExponentRatio
from .newton import NewtonData, analyze_newton
from .structure import FORM, ONE_VAR, TWO_VAR, Decomposition

FORM_CASE_1 = "FormCase1"
FORM_CASE_2 = "FormCase2"


# ---------------------------------------------------------------- chart steps


@dataclass(frozen=True)
class LinearStep:
    """``x_old = M x_new``."""

    matrix: LinearMap

    @property
    def is_linear(self) -> bool:
        return True

    def apply(self, phi: Polynomial) -> Polynomial:
        return compose_linear(phi, self.matrix)


@dataclass(frozen=True)
class TriangularStep:
    """``x_target <- x_target + shift(x_source)``; ``shift`` maps exponent -> coefficient.

    ``truncated`` marks a shift that is a power-series truncation at ``order``.
    """

    target: int
    source: int
    shift: tuple               # ((exponent, coefficient), ...) ascending
    truncated: bool = False
    order: int | None = None

    @classmethod
    def monomial(cls, target: int, source: int, c: Scalar, m: int) -> "TriangularStep":
        return cls(target, source, ((m, c),))

    @property
    def is_linear(self) -> bool:
        return all(k == 1 for k, _ in self.shift)

    @property
    def single_term(self) -> tuple | None:
        """``(c, m)`` when the shift is one monomial."""
        if len(self.shift) == 1:
            m, c = self.shift[0]
            return c, m
        return None

    def shift_polynomial(self, nvars: int) -> Polynomial:
        terms = {}
        for k, c in self.shift:
            e = [0] * nvars
            e[self.source] = k
            terms[tuple(e)] = c
        return Polynomial(terms, nvars)

    def apply(self, phi: Polynomial) -> Polynomial:
        new = Polynomial.var(self.target, phi.nvars) + self.shift_polynomial(phi.nvars)
        return substitute(phi, self.target, new)


@dataclass(frozen=True)
class AdaptedChart:
    """Coordinate changes applied in order to the input.

    ``jet`` is set when a truncated series step was used: it holds the exact
    terms of the limit polynomial with ``x1``-degree at most the truncation
    order, which determine the limit Newton polygon completely.
    """

    steps: tuple
    final_poly: Polynomial
    jet: Polynomial | None = None

    def replay(self, phi: Polynomial) -> Polynomial:
        for s in self.steps:
            phi = s.apply(phi)
        return phi

    def verify(self, phi: Polynomial) -> bool:
        return self.replay(phi) == self.final_poly

    @property
    def adapted_poly(self) -> Polynomial:
        return self.jet if self.jet is not None else self.final_poly

    @property
    def truncated(self) -> bool:
        return any(getattr(s, "truncated", False) for s in self.steps)

    @property
    def linearly_adapted(self) -> bool:
        return all(s.is_linear for s in self.steps)


@dataclass(frozen=True)
class HeightReport:
    h: Fraction
    d_adapted: Fraction
    d_original: Fraction
    nu: int
    face_dim: int
    case: str
    linearly_adapted: bool
    face_dim_2d: int | None = None
    c: tuple | None = None          # (c1, c2, c3), FormCase2 only
    B: LinearMap | None = None      # FormCase2 only
    truncated: bool = False
    notes: tuple = ()


@dataclass(frozen=True)
class ExponentReport:
    beta: Fraction
    log_flag: int
    p_S: Fraction
    p_S_status: str
    indexes: dict
    hessian_rank: int
    remarks: tuple = ()


# ---------------------------------------------------------------- 2D adaptedness


@dataclass(frozen=True)
class Adaptedness:
    adapted: bool
    kind: str
    d: Fraction
    m: int | None                 # m(phi_pr), compact edge only
    kappa: tuple | None
    d_h: Fraction | None
    newton: NewtonData


def _slice(pp: Polynomial, var: int, sign: int) -> list:
    """Dense coefficients of ``pp`` with variable ``1 - var`` fixed to ``sign`` as a function of ``x_var``."""
    dense: dict[int, Scalar] = {}
    for e, c in pp.as_dict().items():
        other = e[1 - var]
        dense[e[var]] = dense.get(e[var], 0) + c * (sign ** other)
    top = max(dense) if dense else 0
    return uv.trim([Fraction(dense.get(k, 0)) for k in range(top + 1)])


def _chart_polys(pp: Polynomial) -> list[list]:
    """phi_pr(1,t), phi_pr(-1,t), phi_pr(t,1), phi_pr(t,-1)."""
    return [_slice(pp, 1, 1), _slice(pp, 1, -1), _slice(pp, 0, 1), _slice(pp, 0, -1)]


def _require_rational(psi: Polynomial) -> None:
    if not psi.is_rational():
        raise IrrationalRoot("the 2D engine needs rational coefficients",
                             polynomial=str(psi))


def adaptedness_2d(psi: Polynomial) -> Adaptedness:
    """Adaptedness test on the principal face (vertex, unbounded edge, or edge with m <= d)."""
    if psi.nvars != 2:
        raise ValueError("bivariate polynomial required")
    _require_rational(psi)
    nd = analyze_newton(psi)
    pd = nd.principal
    kind = pd.kind
    if kind != "compact edge":
        return Adaptedness(True, kind, pd.d, None, pd.kappa, pd.d_h, nd)
    m = max(uv.max_real_multiplicity(p) for p in _chart_polys(nd.principal_part))
    return Adaptedness(m <= pd.d, kind, pd.d, m, pd.kappa, pd.d_h, nd)


# ---------------------------------------------------------------- Varchenko step


def _edge_weights(ad: Adaptedness) -> tuple[int, int]:
    (f,) = [f for f in ad.newton.principal.tight if not f.is_coordinate]
    return f.normal


def _swap(p: Polynomial) -> Polynomial:
    return p.permute((1, 0))


def _orientation(ad: Adaptedness) -> tuple[bool, int]:
    """``(flipped, m)``: integer exponent of the branch ``x2 = t0 x1^m`` (or mirrored)."""
    w1, w2 = _edge_weights(ad)
    if w1 == 1:
        return False, w2
    if w2 == 1:
        return True, w1
    raise NonIntegerExponentRatio("kappa ratio is not an integer in either chart",
                                  kappa=[str(k) for k in ad.kappa])


def _excess_root(pp: Polynomial, d: Fraction) -> tuple[Fraction, int]:
    """Root of ``pp(1, t)`` with multiplicity above ``d``."""
    for r in uv.real_root_multiplicities(_slice(pp, 1, 1)):
        if r.multiplicity > d:
            if r.value is None:
                raise IrrationalRoot("excess-multiplicity root is irrational",
                                     interval=[str(r.lo), str(r.hi)],
                                     multiplicity=r.multiplicity)
            return r.value, r.multiplicity
    raise AssertionError("no excess root on the principal edge")


def varchenko_step_2d(psi: Polynomial) -> TriangularStep:
    """The single-monomial substitution removing the excess root of the principal part."""
    ad = adaptedness_2d(psi)
    if ad.adapted:
        raise ValueError("polynomial is already adapted")
    flipped, m = _orientation(ad)
    pp = _swap(ad.newton.principal_part) if flipped else ad.newton.principal_part
    t0, _ = _excess_root(pp, ad.d)
    return TriangularStep.monomial(0, 1, t0, m) if flipped else TriangularStep.monomial(1, 0, t0, m)


# ---------------------------------------------------------------- branch straightening


def _initial_form(p: Polynomial, w: Sequence[int]) -> Polynomial:
    low = min(w[0] * e[0] + w[1] * e[1] for e in p.support())
    return Polynomial({e: c for e, c in p.as_dict().items()
                       if w[0] * e[0] + w[1] * e[1] == low}, 2)


def _root_multiplicity(dense: list, t0: Fraction) -> int:
    k, p = 0, dense
    while p and uv.evaluate(p, t0) == 0:
        k += 1
        p = uv.derivative(p)
    return k


def _lift_branch(red: Polynomial, t0: Fraction, m: int, n: int) -> list:
    """Coefficients ``r[0..n]`` of the branch ``x2 = r(x1)`` of ``red`` through ``t0 x1^m``.

    The root ``t0`` must be simple in the weighted initial form, so
    ``H(x1, z) = red(x1, x1^m (t0 + z)) / x1^e`` has ``H(0,0)=0 != H_z(0,0)``
    and Newton's method on truncated series converges.
    """
    x1, x2 = Polynomial.var(0, 2), Polynomial.var(1, 2)
    sub = substitute(red, 1, (x1 ** m).scale(t0) + x1 ** m * x2)
    e = min(a for a, _ in sub.support())
    H: dict[int, dict[int, Fraction]] = {}
    for (a, b), c in sub.as_dict().items():
        H.setdefault(b, {})[a - e] = Fraction(c)
    top = max(H)
    prec = max(n - m + 1, 1)
    coeffs = [[H.get(j, {}).get(a, Fraction(0)) for a in range(prec)] for j in range(top + 1)]
    dcoeffs = [[j * c for c in coeffs[j]] for j in range(1, top + 1)] or [[Fraction(0)] * prec]
    z = [Fraction(0)]
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        zk = ps.truncate(z, k)
        val = ps.horner(coeffs, zk, k)
        der = ps.horner(dcoeffs, zk, k)
        corr = ps.mul(val, ps.inverse(der, k), k)
        z = [a - b for a, b in zip(zk, corr)]
    z = ps.truncate(z, prec)
    r = [Fraction(0)] * (n + 1)
    r[m] = t0 + z[0]
    for i in range(1, prec):
        if m + i <= n:
            r[m + i] = z[i]
    return r


def _shift_of(r: list) -> tuple:
    return tuple((k, c) for k, c in enumerate(r) if c)


@dataclass
class _State:
    cur: Polynomial
    red: Polynomial
    steps: list = field(default_factory=list)

    def push(self, step: TriangularStep) -> None:
        self.steps.append(step)
        self.cur = step.apply(self.cur)
        self.red = step.apply(self.red)


def _branch_step(state: _State, flipped: bool, t0: Fraction, m: int, k: int):
    """Straighten a smooth branch of multiplicity ``k``.

    Returns ``jet`` (``None`` when the branch is polynomial and the step exact).

    Exactness of the truncated case: with ``r_N`` the branch truncated at
    order ``N`` the substituted polynomial equals the limit ``y2^k G(y1, y2)``
    evaluated at ``y2 - O(x1^{N+1})``, so every monomial with ``x1``-degree
    ``<= N`` is that of the limit.  Once such a monomial with ``y2``-degree
    exactly ``k`` appears, all vertices of the limit polygon are among them.
    """
    cur = _swap(state.cur) if flipped else state.cur
    red = _swap(state.red) if flipped else state.red
    deg = max(cur.degree(), 2)
    n = max(2 * deg, m + 8)
    cap = 4 * deg * deg + 16
    x2 = Polynomial.var(1, 2)
    while True:
        r = _lift_branch(red, t0, m, n)
        shift = _shift_of(r)
        r_poly = Polynomial({(a, 0): c for a, c in shift}, 2)
        exact = substitute(red, 1, r_poly).is_zero()
        tgt, src = (0, 1) if flipped else (1, 0)
        if exact:
            state.push(TriangularStep(tgt, src, shift))
            return None
        moved = substitute(cur, 1, x2 + r_poly)
        jet = Polynomial({e: c for e, c in moved.as_dict().items() if e[0] <= n}, 2)
        low = min(e[1] for e in jet.support())
        if low < k:
            raise AssertionError("branch multiplicity inconsistent with the series shift")
        if low == k:
            state.push(TriangularStep(tgt, src, shift, truncated=True, order=n))
            return _swap(jet) if flipped else jet
        if n >= cap:
            raise IterationCapExceeded("series order cap reached while straightening a branch",
                                       order=n)
        n = min(2 * n, cap)


# ---------------------------------------------------------------- 2D driver


@dataclass(frozen=True)
class Result2D:
    chart: AdaptedChart
    h: Fraction
    nu: int
    adaptedness: Adaptedness
    notes: tuple = ()


def _vertex_revealing_root(pp: Polynomial, d: Fraction, flipped: bool) -> Scalar | None:
    """A real root of the edge polynomial with multiplicity exactly ``d`` (rational or quadratic)."""
    if d.denominator != 1:
        return None
    pp = _swap(pp) if flipped else pp
    for s, mult in uv.squarefree_decomposition(_slice(pp, 1, 1)):
        if mult != d:
            continue
        s = uv.trim(s)
        if len(s) == 2:
            return -Fraction(s[0]) / Fraction(s[1])
        if len(s) == 3:
            c, b, a = (Fraction(x) for x in s)
            disc = b * b - 4 * a * c
            if disc >= 0:
                return (-b + sqrt_rational(disc)) / (2 * a)
    return None


def adapt_2d(psi: Polynomial, cap: int | None = None) -> Result2D:
    """Adapted coordinates for a bivariate polynomial, with height and Varchenko exponent."""
    if psi.nvars != 2:
        raise ValueError("bivariate polynomial required")
    _require_rational(psi)
    if cap is None:
        cap = 4 * max(psi.degree(), 1)
    state = _State(psi, squarefree_part(psi))
    jet = None
    for _ in range(cap + 1):
        ad = adaptedness_2d(state.cur)
        if ad.adapted:
            break
        flipped, m = _orientation(ad)
        pp = ad.newton.principal_part
        t0, k = _excess_root(_swap(pp) if flipped else pp, ad.d)
        red = _swap(state.red) if flipped else state.red
        w = (1, m)
        simple = _root_multiplicity(_slice(_initial_form(red, w), 1, 1), t0) == 1
        if simple and k >= 2:
            jet = _branch_step(state, flipped, t0, m, k)
            if jet is not None:
                ad = adaptedness_2d(jet)
                if not ad.adapted:
                    raise IterationCapExceeded(
                        "limit polygon after branch straightening is not adapted",
                        partial=AdaptedChart(tuple(state.steps), state.cur, jet))
                break
            continue
        state.push(TriangularStep.monomial(0, 1, t0, m) if flipped
                   else TriangularStep.monomial(1, 0, t0, m))
    else:
        raise IterationCapExceeded(f"2D adaptation did not finish in {cap} steps",
                                   partial=AdaptedChart(tuple(state.steps), state.cur))
    pd = ad.newton.principal
    h = pd.d
    if ad.kind == "compact edge" and pd.d_h != h:
        raise AssertionError("compact-edge adapted case must have d = d_h")
    nu, notes = 0, []
    if h >= 2 and ad.kind == "vertex":
        nu = 1
    elif h >= 2 and ad.kind == "compact edge":
        try:
            flipped, m = _orientation(ad)
        except NonIntegerExponentRatio:
            flipped = None
        root = None if flipped is None else _vertex_revealing_root(ad.newton.principal_part, h, flipped)
        if root is not None:
            nu = 1
            if jet is None:
                step = (TriangularStep.monomial(0, 1, root, m) if flipped
                        else TriangularStep.monomial(1, 0, root, m))
                state.push(step)
                pd2 = analyze_newton(state.cur).principal
                if not (pd2.kind == "vertex" and pd2.d == h):
                    raise AssertionError("vertex-revealing step failed")
                ad = Adaptedness(True, "vertex", h, None, None, None, analyze_newton(state.cur))
            else:
                notes.append("principal edge has a root of multiplicity h; vertex reached by one more step")
    chart = AdaptedChart(tuple(state.steps), state.cur, jet)
    if jet is not None:
        notes.append(f"branch straightened by a power series truncated at order "
                     f"{state.steps[-1].order}; Newton data from the exact jet")
    return Result2D(chart, h, nu, ad, tuple(notes))


# ---------------------------------------------------------------- 3D pipeline


def _form_constants(dec: Decomposition) -> tuple:
    def tilde0(Q: Polynomial, nu) -> Fraction:
        return Fraction(0) if nu == math.inf else Q.coeff((nu,))

    n1, n2, n3 = dec.nu1, dec.nu2, dec.nu3
    c1 = tilde0(dec.Q1, n1) if n1 == n2 + 1 else Fraction(0)
    c2 = tilde0(dec.Q2, n2)
    c3 = tilde0(dec.Q3, n3) if n3 == n2 else Fraction(0)
    return c1, c2, c3


def form_remainder_ok(final: Polynomial, nu2: int) -> bool:
    """Every monomial of ``final - z1^nu2 z2`` has total degree ``>= nu2 + 2``."""
    rest = final - Polynomial.monomial((nu2, 1, 0))
    return all(sum(e) >= nu2 + 2 for e in rest.support())


def adapt_3d(phi: Polynomial, dec: Decomposition) -> tuple[AdaptedChart, HeightReport]:
    d_orig = analyze_newton(phi).d
    A = LinearStep(dec.A)
    notes: tuple = ()
    if dec.case == ONE_VAR:
        chart = AdaptedChart((A,), dec.composed)
        h, nu, case, face2 = Fraction(dec.nu), 0, ONE_VAR, None
        c = B = None
    elif dec.case == TWO_VAR:
        res = adapt_2d(dec.psi)
        steps = (A,) + res.chart.steps
        jet = res.chart.jet.embed(3) if res.chart.jet is not None else None
        chart = AdaptedChart(steps, res.chart.final_poly.embed(3), jet)
        h, nu, case = res.h, res.nu, TWO_VAR
        face2 = res.adaptedness.newton.principal.face_dim
        c = B = None
        notes = res.notes
    elif dec.case == FORM:
        if dec.nu1 <= dec.nu2:
            chart = AdaptedChart((A,), dec.composed)
            h, case, c, B = Fraction(dec.nu1), FORM_CASE_1, None, None
        else:
            c1, c2, c3 = _form_constants(dec)
            C = LinearMap([[1, 0, 0], [-c1 / c2, 1 / c2, -c3 / c2], [0, 0, 1]])
            final = compose_linear(dec.composed, C)
            chart = AdaptedChart((A, LinearStep(C)), final)
            h, case, c, B = Fraction(dec.nu2), FORM_CASE_2, (c1, c2, c3), dec.A @ C
            if final.coeff((dec.nu2, 1, 0)) != 1 or not form_remainder_ok(final, dec.nu2):
                raise AssertionError("Form case-2 coordinates do not have the expected shape")
        nu, face2 = 0, None
    else:
        raise ValueError(f"unknown case {dec.case!r}")
    nd = analyze_newton(chart.adapted_poly)
    if nd.d != h:
        raise AssertionError(f"distance {nd.d} in adapted coordinates differs from height {h}")
    if h < d_orig:
        raise AssertionError("height below the original distance")
    report = HeightReport(h=h, d_adapted=nd.d, d_original=d_orig, nu=nu,
                          face_dim=nd.principal.face_dim, case=case,
                          linearly_adapted=chart.linearly_adapted, face_dim_2d=face2,
                          c=c, B=B, truncated=chart.truncated, notes=tuple(notes))
    return chart, report


def varchenko_exponent(report: HeightReport) -> int:
    return report.nu


def exponent_report(h: Fraction, nu: int, hessian_rank: int, nu2: int | None = None) -> ExponentReport:
    """Decay, boundedness and contact exponents from ``(h, nu, rank D^2 phi(0))``."""
    h = Fraction(h)
    beta = 1 / h
    if h >= 2 or hessian_rank == 0:
        p_S, status = h, "exact"
    elif hessian_rank == 2:
        p_S, status = Fraction(3, 2), "curvature-case"
    else:
        p_S, status = h, "lower-bound-only"
    remarks = []
    if nu2 == 1:
        remarks.append("D^2 phi has rank two away from a null set; "
                       "the maximal operator is bounded for p > 3/2")
    idx = {"beta_u": beta, "beta": beta, "gamma_u": beta, "gamma": beta}
    return ExponentReport(beta, nu, p_S, status, idx, hessian_rank, tuple(remarks))


def report_for(phi: Polynomial, dec: Decomposition) -> tuple[AdaptedChart, HeightReport, ExponentReport]:
    chart, hr = adapt_3d(phi, dec)
    ex = exponent_report(hr.h, hr.nu, quadratic_rank_at_origin(phi),
                         dec.nu2 if hr.case == FORM_CASE_2 else None)
    return chart, hr, ex


__all__ = [
    "AdaptedChart", "Adaptedness", "ExponentReport", "FORM_CASE_1", "FORM_CASE_2", "HeightReport",
    "LinearStep", "Result2D", "TriangularStep", "adapt_2d", "adapt_3d", "adaptedness_2d",
    "exponent_report", "report_for", "varchenko_exponent", "varchenko_step_2d",
]
