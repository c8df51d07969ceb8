"""Structural decomposition of trivariate polynomials with vanishing Hessian.

For such a polynomial there is an invertible matrix ``A`` with ``phi(Ax)``
either depending on at most two variables or of the shape
``Q1(x1) + Q2(x1) x2 + Q3(x1) x3``.  This module finds such an ``A`` exactly
and verifies the claimed shape as a polynomial identity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import LinearMap, Polynomial, compose_linear, hessian_det
from .algebra.linalg import complete_basis, nullspace, primitive, rank
from .algebra.ops import hessian_coefficient_matrices
from .algebra.scalars import (
    FieldMismatchError,
    QuadraticNumber,
    Scalar,
    sqrt_rational,
)
from .errors import CandidateIrrational, NotDegenerate, PreconditionError, Unrepresentable

INFINITY = math.inf

ONE_VAR = "OneVar"
TWO_VAR = "TwoVar"
FORM = "Form"


@dataclass(frozen=True)
class HessianReport:
    vanishes: bool
    witness: tuple | None = None        # rational point with nonzero determinant
    value: Fraction | None = None       # determinant at the witness


@dataclass(frozen=True)
class Decomposition:
    """Witness ``A`` and the shape of ``phi(Ax)``.

    OneVar: ``phi(Ax) = x1^nu * Q(x1)``.  TwoVar: ``phi(Ax) = psi(x1, x2)``.
    Form: ``phi(Ax) = Q1(x1) + Q2(x1) x2 + Q3(x1) x3`` with multiplicities
    ``nu1`` (``math.inf`` when ``Q1 == 0``), ``nu2 <= nu3``.
    """

    case: str
    A: LinearMap
    composed: Polynomial
    nu: int | None = None
    Q: Polynomial | None = None
    psi: Polynomial | None = None
    Q1: Polynomial | None = None
    Q2: Polynomial | None = None
    Q3: Polynomial | None = None
    nu1: float | int | None = None
    nu2: int | None = None
    nu3: int | None = None

    def shape_polynomial(self) -> Polynomial:
        """The declared shape rebuilt from the payload, as a polynomial in x1, x2, x3."""
        x1, x2, x3 = (Polynomial.var(i) for i in range(3))
        if self.case == ONE_VAR:
            return x1 ** self.nu * self.Q.embed(3)
        if self.case == TWO_VAR:
            return self.psi.embed(3)
        return self.Q1.embed(3) + self.Q2.embed(3) * x2 + self.Q3.embed(3) * x3

    def verify(self, phi: Polynomial) -> bool:
        return compose_linear(phi, self.A) == self.shape_polynomial() == self.composed


# ---------------------------------------------------------------- helpers


def as_trivariate(phi: Polynomial) -> Polynomial:
    return phi if phi.nvars == 3 else phi.embed(3)


def check_preconditions(phi: Polynomial) -> None:
    if phi.is_zero():
        raise PreconditionError("polynomial is identically zero")
    if phi.constant_term():
        raise PreconditionError("phi(0) must be 0", constant=str(phi.constant_term()))
    if phi.homogeneous_part(1):
        raise PreconditionError("gradient at the origin must vanish",
                                linear_part=str(phi.homogeneous_part(1)))


def _order(q: Polynomial) -> float | int:
    """Multiplicity of x1 = 0 as a root of a univariate polynomial (inf for zero)."""
    return INFINITY if q.is_zero() else min(e[0] for e in q.support())


def _lattice_points(radius: int):
    pts = list(product(range(-radius, radius + 1), repeat=3))
    pts.sort(key=lambda p: (max(map(abs, p)), sum(map(abs, p)), p))
    return pts


# ---------------------------------------------------------------- Hessian


def kernel_directions(phi: Polynomial) -> list[list]:
    """Basis of constant vectors ``v`` with ``v . grad(phi) == 0`` identically."""
    phi = as_trivariate(phi)
    grads = [phi.derivative(i) for i in range(3)]
    monos = sorted({e for g in grads for e in g.as_dict()})
    rows = [[g.coeff(e) for g in grads] for e in monos]
    if not rows:
        return [[Fraction(int(i == j)) for i in range(3)] for j in range(3)]
    return nullspace(rows)


def hessian_vanishes(phi: Polynomial) -> HessianReport:
    """Decide ``det D^2 phi == 0`` exactly; otherwise give a small lattice witness."""
    phi = as_trivariate(phi)
    if kernel_directions(phi):
        # phi(Ax) misses a variable for some A, so a row of the Hessian vanishes
        return HessianReport(True)
    H = hessian_det(phi)
    if H.is_zero():
        return HessianReport(True)
    # a nonzero polynomial of degree D cannot vanish on a grid of D+1 points per axis
    for p in _lattice_points(max(H.degree(), 0) // 2 + 1):
        v = H.evaluate([Fraction(x) for x in p])
        if v:
            return HessianReport(False, tuple(Fraction(x) for x in p), v)
    raise AssertionError("no witness found for a nonzero determinant")


# ---------------------------------------------------------------- reduction


def reduce_variables(phi: Polynomial, dirs: Sequence[Sequence]) -> Decomposition:
    """Put the kernel directions last; the result misses the trailing variables."""
    phi = as_trivariate(phi)
    if not dirs:
        raise ValueError("no kernel directions supplied")
    if len(dirs) >= 3:
        raise PreconditionError("polynomial is constant")
    cols = complete_basis(dirs, 3) + [list(v) for v in dirs]
    A = LinearMap.from_columns(cols)
    composed = compose_linear(phi, A)
    keep = 3 - len(dirs)
    for i in range(keep, 3):
        if composed.uses_variable(i):
            raise Unrepresentable("internal error: eliminated variable still present",
                                  composed=str(composed))
    if keep == 1:
        q = composed.restrict(1)
        nu = int(_order(q))
        Q = Polynomial({(e[0] - nu,): c for e, c in q.as_dict().items()}, 1)
        dec = Decomposition(ONE_VAR, A, composed, nu=nu, Q=Q)
    else:
        dec = Decomposition(TWO_VAR, A, composed, psi=composed.restrict(2))
    _assert_valid(phi, dec)
    return dec


def _assert_valid(phi: Polynomial, dec: Decomposition) -> None:
    if not dec.verify(phi):
        raise Unrepresentable("internal error: decomposition witness does not verify",
                              case=dec.case)


# ---------------------------------------------------------------- form detection


def _bilinear(M, u, v):
    total: Scalar = Fraction(0)
    for i in range(3):
        if not u[i]:
            continue
        for j in range(3):
            if v[j] and M[i][j]:
                total = total + u[i] * M[i][j] * v[j]
    return total


def _isotropic(mats, basis) -> bool:
    w1, w2 = basis
    for M in mats:
        if _bilinear(M, w1, w1) or _bilinear(M, w1, w2) or _bilinear(M, w2, w2):
            return False
    return True


def candidate_planes(M) -> list[list]:
    """Totally isotropic 2-planes of one symmetric 3x3 form of rank 1 or 2.

    Returns bases ``[w1, w2]``; entries may lie in Q(sqrt(D)).
    """
    r = rank(M)
    if r == 1:
        return [nullspace(M)]
    if r != 2:
        return []
    (k,) = nullspace(M)
    u, v = complete_basis([k], 3)
    a, b, c = _bilinear(M, u, u), _bilinear(M, u, v), _bilinear(M, v, v)
    if a == 0:
        lines = [u, [c * x - 2 * b * y for x, y in zip(u, v)]]
    else:
        disc = b * b - a * c
        if isinstance(disc, QuadraticNumber):
            # sqrt(p + q sqrt(D)) has minimal polynomial t^4 - 2p t^2 + (p^2 - q^2 D)
            raise CandidateIrrational(
                "witness plane needs the square root of a quadratic irrational",
                minimal_polynomial=f"t^4 - {2 * disc.a}*t^2 + {disc.norm()}")
        if disc < 0:
            return []
        root = sqrt_rational(disc)
        lines = []
        for s in (1, -1):
            coef = -b + s * root
            lines.append([coef * x + a * y for x, y in zip(u, v)])
    return [[list(k), primitive(r_)] for r_ in lines]


def detect_form(phi: Polynomial) -> Decomposition | None:
    """Find ``A`` with ``phi(Ax) = Q1(x1) + Q2(x1) x2 + Q3(x1) x3``, or ``None``."""
    phi = as_trivariate(phi)
    mats = list(hessian_coefficient_matrices(phi).values())
    if not mats:
        return None
    ranks = [rank(M) for M in mats]
    top = max(ranks)
    if top == 0 or top == 3:
        return None
    M = mats[ranks.index(top)]
    try:
        planes = candidate_planes(M)
    except FieldMismatchError as exc:
        raise CandidateIrrational(str(exc)) from None
    for basis in planes:
        try:
            ok = _isotropic(mats, basis)
        except FieldMismatchError as exc:
            raise CandidateIrrational("witness plane needs a second quadratic extension",
                                      detail=str(exc)) from None
        if ok:
            return _form_from_plane(phi, basis)
    return None


def _form_from_plane(phi: Polynomial, basis) -> Decomposition | None:
    (col1,) = complete_basis(basis, 3)
    A = LinearMap.from_columns([col1, basis[0], basis[1]])
    return form_from_matrix(phi, A)


def form_from_matrix(phi: Polynomial, A: LinearMap) -> Decomposition | None:
    """Read ``Q1, Q2, Q3`` off ``phi(Ax)`` if it has the form shape, else ``None``."""
    composed = compose_linear(as_trivariate(phi), A)
    parts: list[dict] = [{}, {}, {}]
    for e, c in composed.as_dict().items():
        if e[1] + e[2] > 1:
            return None
        slot = 0 if e[1] + e[2] == 0 else (1 if e[1] else 2)
        parts[slot][(e[0],)] = c
    Q1, Q2, Q3 = (Polynomial(p, 1) for p in parts)
    nu1, nu2, nu3 = _order(Q1), _order(Q2), _order(Q3)
    if Q2.is_zero() or Q3.is_zero():
        return None
    if nu3 < nu2:
        swap = LinearMap([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
        A = A @ swap
        composed = compose_linear(as_trivariate(phi), A)
        Q2, Q3, nu2, nu3 = Q3, Q2, nu3, nu2
    dec = Decomposition(FORM, A, composed, Q1=Q1, Q2=Q2, Q3=Q3,
                        nu1=nu1 if nu1 == INFINITY else int(nu1), nu2=int(nu2), nu3=int(nu3))
    _assert_valid(phi, dec)
    return dec


# ---------------------------------------------------------------- entry points


def decompose(phi: Polynomial) -> Decomposition:
    """Structural decomposition; raises NotDegenerate or Unrepresentable."""
    phi = as_trivariate(phi)
    check_preconditions(phi)
    dirs = kernel_directions(phi)
    if dirs:
        return reduce_variables(phi, dirs)
    report = hessian_vanishes(phi)
    if not report.vanishes:
        raise NotDegenerate("Hessian determinant does not vanish identically",
                            witness=[str(x) for x in report.witness], value=str(report.value))
    dec = detect_form(phi)
    if dec is None:
        raise Unrepresentable("no reduction and no form plane found",
                              hessian_coefficient_ranks=sorted(
                                  {rank(M) for M in hessian_coefficient_matrices(phi).values()}))
    return dec


def decompose_with_matrix(phi: Polynomial, A: LinearMap) -> Decomposition:
    """Use a caller-supplied witness ``A``; the shape of ``phi(Ax)`` is checked exactly."""
    phi = as_trivariate(phi)
    check_preconditions(phi)
    composed = compose_linear(phi, A)
    used = [composed.uses_variable(i) for i in range(3)]
    if sum(used) < 3 and used != sorted(used, reverse=True):
        # move the variables that occur to the front
        order = [i for i in range(3) if used[i]] + [i for i in range(3) if not used[i]]
        P = LinearMap([[int(order[j] == i) for j in range(3)] for i in range(3)])
        A = A @ P
        composed = compose_linear(phi, A)
        used = [composed.uses_variable(i) for i in range(3)]
    if not used[1] and not used[2]:
        q = composed.restrict(1)
        nu = int(_order(q))
        Q = Polynomial({(e[0] - nu,): c for e, c in q.as_dict().items()}, 1)
        dec = Decomposition(ONE_VAR, A, composed, nu=nu, Q=Q)
    elif not used[2]:
        dec = Decomposition(TWO_VAR, A, composed, psi=composed.restrict(2))
    else:
        dec = form_from_matrix(phi, A)
        if dec is None:
            raise Unrepresentable("supplied matrix does not bring phi into a supported shape",
                                  composed=str(composed))
    _assert_valid(phi, dec)
    return dec


def form_plane_condition(phi: Polynomial, dec: Decomposition) -> bool:
    """Every Hessian coefficient matrix has rank <= 2 and annihilates span(col2, col3)."""
    mats = list(hessian_coefficient_matrices(as_trivariate(phi)).values())
    basis = [dec.A.column(1), dec.A.column(2)]
    return all(rank(M) <= 2 for M in mats) and _isotropic(mats, basis)


__all__ = [
    "Decomposition",
    "FORM",
    "HessianReport",
    "INFINITY",
    "ONE_VAR",
    "TWO_VAR",
    "candidate_planes",
    "check_preconditions",
    "decompose",
    "decompose_with_matrix",
    "detect_form",
    "form_from_matrix",
    "form_plane_condition",
    "hessian_vanishes",
    "kernel_directions",
    "reduce_variables",
]
