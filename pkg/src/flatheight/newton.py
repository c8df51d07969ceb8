"""Newton polyhedra of polynomials in two or three variables.

The polyhedron of a support set ``S`` is ``conv(S) + R^n_+``.  It is stored as
an irredundant list of facets ``w.t >= c`` with primitive integer normals
``w >= 0``; the coordinate facets ``t_i >= min_i`` are always included so that
non-compact faces are described uniformly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .algebra import Polynomial
from .algebra.linalg import rank

Point = tuple


class SupportError(ValueError):
    """Invalid input for Newton-polyhedron construction."""


@dataclass(frozen=True)
class SupportSet:
    points: tuple
    dim: int

    def __post_init__(self):
        if not self.points:
            raise SupportError("support set is empty")
        if any(len(p) != self.dim for p in self.points):
            raise SupportError("point dimension mismatch")


@dataclass(frozen=True)
class Facet:
    """Half-space ``normal . t >= offset`` with primitive non-negative integer normal."""

    normal: tuple
    offset: int

    def value(self, t: Sequence) -> Fraction:
        return sum((w * x for w, x in zip(self.normal, t)), Fraction(0))

    def contains(self, t: Sequence) -> bool:
        return self.value(t) >= self.offset

    def tight(self, t: Sequence) -> bool:
        return self.value(t) == self.offset

    @property
    def is_coordinate(self) -> bool:
        return sum(1 for w in self.normal if w) == 1


@dataclass(frozen=True)
class NewtonPolyhedron:
    dim: int
    generators: SupportSet
    facets: tuple
    vertices: tuple

    def contains(self, t: Sequence) -> bool:
        return all(f.contains(t) for f in self.facets)

    def nontrivial_facets(self) -> tuple:
        return tuple(f for f in self.facets if f.offset > 0)


@dataclass(frozen=True)
class PrincipalData:
    d: Fraction
    face_dim: int
    compact: bool
    tight: tuple                 # facets containing (d, ..., d)
    face_points: tuple           # support points on the principal face
    face_vertices: tuple         # vertices of the polyhedron on the principal face
    recession: tuple             # coordinate directions e_i contained in the face
    kappa: tuple | None = None   # 2D compact edge only
    d_h: Fraction | None = None  # 2D compact edge only

    @property
    def kind(self) -> str:
        if self.face_dim == 0:
            return "vertex"
        if self.face_dim == 1:
            return "compact edge" if self.compact else "unbounded edge"
        return "compact facet" if self.compact else "unbounded facet"


# ---------------------------------------------------------------- support


def taylor_support(phi: Polynomial) -> SupportSet:
    if phi.is_zero():
        raise SupportError("zero polynomial has empty Taylor support")
    if phi.constant_term():
        raise SupportError("polynomial does not vanish at the origin")
    return SupportSet(tuple(sorted(phi.support())), phi.nvars)


def _minimal_points(points) -> list:
    """Drop points that dominate another point componentwise; they never matter."""
    pts = sorted(set(tuple(p) for p in points))
    keep = []
    for p in pts:
        if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts):
            keep.append(p)
    return keep


def _primitive_int(v: Sequence[int]) -> tuple:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g else tuple(v)


def _dot(w, p) -> int:
    return sum(a * b for a, b in zip(w, p))


def _cross(a, b) -> tuple:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _orient(w) -> tuple | None:
    if all(x >= 0 for x in w) and any(w):
        return _primitive_int(w)
    if all(x <= 0 for x in w) and any(w):
        return _primitive_int([-x for x in w])
    return None


def _face_dimension(normal, offset, pts, dim) -> int:
    tight = [p for p in pts if _dot(normal, p) == offset]
    rec = [tuple(int(k == i) for k in range(dim)) for i in range(dim) if normal[i] == 0]
    vecs = [tuple(a - b for a, b in zip(p, tight[0])) for p in tight[1:]] + rec
    return rank([list(map(Fraction, v)) for v in vecs]) if vecs else 0


def _facets_3d(pts) -> list:
    axes = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    cands = set(axes)
    for a, b, c in combinations(pts, 3):
        u = tuple(x - y for x, y in zip(b, a))
        v = tuple(x - y for x, y in zip(c, a))
        w = _orient(_cross(u, v))
        if w:
            cands.add(w)
    for a, b in combinations(pts, 2):
        u = tuple(x - y for x, y in zip(b, a))
        for e in axes:
            w = _orient(_cross(u, e))
            if w:
                cands.add(w)
    facets = []
    for w in sorted(cands):
        c = min(_dot(w, p) for p in pts)
        if _face_dimension(w, c, pts, 3) == 2:
            facets.append(Facet(w, c))
    return facets


def _facets_2d(pts) -> list:
    # minimal points sorted by t1 form a staircase; take its lower convex hull
    stair = sorted(pts)
    hull: list = []
    for p in stair:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # pop while the middle point is not strictly below the chord
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    facets = [Facet((1, 0), hull[0][0]), Facet((0, 1), hull[-1][1])]
    for a, b in zip(hull, hull[1:]):
        w = _primitive_int((a[1] - b[1], b[0] - a[0]))
        facets.append(Facet(w, _dot(w, a)))
    return facets


def build_polyhedron(s: SupportSet) -> NewtonPolyhedron:
    pts = _minimal_points(s.points)
    if s.dim == 1:
        facets = [Facet((1,), pts[0][0])]
    elif s.dim == 2:
        facets = _facets_2d(pts)
    elif s.dim == 3:
        facets = _facets_3d(pts)
    else:
        raise SupportError("only dimensions 1, 2, 3 are supported")
    facets.sort(key=lambda f: (f.normal, f.offset))
    vertices = []
    for p in pts:
        normals = [list(map(Fraction, f.normal)) for f in facets if _dot(f.normal, p) == f.offset]
        if normals and rank(normals) == s.dim:
            vertices.append(p)
    return NewtonPolyhedron(s.dim, s, tuple(facets), tuple(sorted(vertices)))


def newton_polyhedron(phi: Polynomial) -> NewtonPolyhedron:
    return build_polyhedron(taylor_support(phi))


def newton_distance(N: NewtonPolyhedron) -> Fraction:
    return max(Fraction(f.offset, sum(f.normal)) for f in N.facets)


def principal_face(N: NewtonPolyhedron, d: Fraction | None = None) -> PrincipalData:
    if d is None:
        d = newton_distance(N)
    diag = (d,) * N.dim
    tight = tuple(f for f in N.facets if f.tight(diag))
    if not tight:
        raise ValueError("(d,...,d) is not on the boundary; wrong distance")
    pts = _minimal_points(N.generators.points)
    on_face = [p for p in sorted(set(N.generators.points))
               if all(_dot(f.normal, p) == f.offset for f in tight)]
    recession = tuple(i for i in range(N.dim) if all(f.normal[i] == 0 for f in tight))
    base = [p for p in pts if p in on_face]
    vecs = [tuple(a - b for a, b in zip(p, base[0])) for p in base[1:]]
    vecs += [tuple(int(k == i) for k in range(N.dim)) for i in recession]
    face_dim = rank([list(map(Fraction, v)) for v in vecs]) if vecs else 0
    if face_dim != N.dim - rank([list(map(Fraction, f.normal)) for f in tight]):
        raise AssertionError("inconsistent principal-face dimension")
    verts = tuple(v for v in N.vertices if v in on_face)
    compact = not recession
    kappa = d_h = None
    if N.dim == 2 and face_dim == 1 and compact:
        (f,) = [f for f in tight if not f.is_coordinate] or tight[:1]
        kappa = (Fraction(f.normal[0], f.offset), Fraction(f.normal[1], f.offset))
        d_h = 1 / (kappa[0] + kappa[1])
    return PrincipalData(d, face_dim, compact, tight, tuple(on_face), verts, recession, kappa, d_h)


def principal_part(phi: Polynomial, pd: PrincipalData) -> Polynomial:
    keep = set(pd.face_points)
    return Polynomial({e: c for e, c in phi.as_dict().items() if e in keep}, phi.nvars)


@dataclass(frozen=True)
class NewtonData:
    """Convenience bundle: polyhedron, distance and principal face of one polynomial."""

    polyhedron: NewtonPolyhedron
    principal: PrincipalData
    principal_part: Polynomial

    @property
    def d(self) -> Fraction:
        return self.principal.d


def analyze_newton(phi: Polynomial) -> NewtonData:
    N = newton_polyhedron(phi)
    pd = principal_face(N)
    return NewtonData(N, pd, principal_part(phi, pd))


def compact_edges_2d(N: NewtonPolyhedron) -> list[tuple[Facet, tuple]]:
    """Compact edges of a 2D Newton polygon with their two endpoint vertices."""
    if N.dim != 2:
        raise ValueError("2D polyhedron required")
    out = []
    for f in N.facets:
        if f.is_coordinate:
            continue
        ends = sorted(v for v in N.vertices if f.tight(v))
        out.append((f, (ends[0], ends[-1])))
    return out


def polyhedron_to_json(N: NewtonPolyhedron, pd: PrincipalData | None = None) -> dict:
    from .algebra.scalars import scalar_to_json

    out = {
        "dim": N.dim,
        "generators": [list(p) for p in N.generators.points],
        "facets": [{"normal": [str(w) for w in f.normal], "offset": str(f.offset)} for f in N.facets],
        "vertices": [list(v) for v in N.vertices],
    }
    if pd is not None:
        out.update({
            "distance": scalar_to_json(pd.d),
            "principal_face": {
                "vertices": [list(v) for v in pd.face_vertices],
                "face_dim": pd.face_dim,
                "compact": pd.compact,
                "kind": pd.kind,
            },
        })
        if pd.kappa is not None:
            out["principal_face"]["kappa"] = [scalar_to_json(k) for k in pd.kappa]
            out["principal_face"]["d_h"] = scalar_to_json(pd.d_h)
    return out


__all__ = [
    "Facet",
    "NewtonData",
    "NewtonPolyhedron",
    "PrincipalData",
    "SupportError",
    "SupportSet",
    "analyze_newton",
    "build_polyhedron",
    "compact_edges_2d",
    "newton_distance",
    "newton_polyhedron",
    "polyhedron_to_json",
    "principal_face",
    "principal_part",
    "taylor_support",
]
