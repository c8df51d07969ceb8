from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatheight.algebra import Polynomial, parse
from flatheight.lp import in_polyhedron, minimize, newton_distance_lp
from flatheight.newton import (
    SupportError,
    SupportSet,
    analyze_newton,
    build_polyhedron,
    newton_distance,
    principal_face,
    principal_part,
    taylor_support,
)


def facets(N):
    return {(f.normal, f.offset) for f in N.facets}


def test_taylor_support_examples():
    assert taylor_support(parse("x1^2*x2")).points == ((2, 1, 0),)
    assert set(taylor_support(parse("x1^3 + x1^2*x2 + x1^4*x3")).points) == {
        (3, 0, 0), (2, 1, 0), (4, 0, 1)}
    assert set(taylor_support(parse("x2^2 - 2*x1^2*x2 + x1^4", nvars=2)).points) == {
        (0, 2), (2, 1), (4, 0)}


def test_taylor_support_errors():
    with pytest.raises(SupportError):
        taylor_support(Polynomial.zero())
    with pytest.raises(SupportError):
        taylor_support(parse("1 + x1"))


def test_build_polyhedron_examples():
    N = build_polyhedron(SupportSet(((3, 0, 0),), 3))
    assert facets(N) == {((1, 0, 0), 3), ((0, 1, 0), 0), ((0, 0, 1), 0)}
    nu1, nu2, nu3 = 2, 3, 3
    N = build_polyhedron(SupportSet(((nu2, 1, 0), (nu1, 0, 0), (nu3, 0, 1)), 3))
    assert {f for f in facets(N) if f[1] > 0} == {((1, 0, 0), 2)}
    N = build_polyhedron(SupportSet(((0, 2), (2, 1), (4, 0)), 2))
    assert {f for f in facets(N) if f[1] > 0} == {((1, 2), 4)}


def test_newton_distance_examples():
    assert newton_distance(build_polyhedron(SupportSet(((3, 0, 0),), 3))) == 3
    assert newton_distance(build_polyhedron(SupportSet(((2, 1), (0, 4)), 2))) == Fraction(8, 5)
    assert newton_distance(build_polyhedron(SupportSet(((0, 2), (2, 1), (4, 0)), 2))) == Fraction(4, 3)


def test_principal_face_single_generator_3d():
    # (2,2,2) is tight only on t1 >= 2: the face is that whole unbounded facet
    N = build_polyhedron(SupportSet(((2, 1, 0),), 3))
    pd = principal_face(N)
    assert pd.d == 2
    assert [(f.normal, f.offset) for f in pd.tight] == [((1, 0, 0), 2)]
    assert pd.face_dim == 2 and not pd.compact
    assert pd.recession == (1, 2)


def test_principal_face_vertex_and_edge():
    pd = principal_face(build_polyhedron(SupportSet(((2, 2),), 2)))
    assert pd.kind == "vertex" and pd.d == 2
    pd = principal_face(build_polyhedron(SupportSet(((0, 2), (2, 1), (4, 0)), 2)))
    assert pd.kind == "compact edge"
    assert pd.kappa == (Fraction(1, 4), Fraction(1, 2))
    assert pd.d_h == Fraction(4, 3)


def test_principal_part_examples():
    for text in ("x1^2 + x2^3", "x1^2*x2^2", "x2^2 + x1^9"):
        phi = parse(text, nvars=2)
        nd = analyze_newton(phi)
        assert nd.principal_part == phi
    assert analyze_newton(parse("x2^2 + x1^9", nvars=2)).d == Fraction(18, 11)
    phi = parse("x1^2 + x2^3 + x1*x2^3", nvars=2)
    nd = analyze_newton(phi)
    assert principal_part(phi, nd.principal) == parse("x1^2 + x2^3", nvars=2)


def test_compact_edge_kappa_invariant():
    nd = analyze_newton(parse("x1^2 + x2^3", nvars=2))
    k = nd.principal.kappa
    for a in nd.principal.face_points:
        assert k[0] * a[0] + k[1] * a[1] == 1
    assert nd.principal.d_h == 1 / (k[0] + k[1]) == Fraction(6, 5)


# ---------------------------------------------------------------- LP oracle


def test_lp_small_problem():
    value, x = minimize([1, 1], [[1, 2], [3, 1]], [4, Fraction(7, 2)])
    assert value == Fraction(23, 10) and x == [Fraction(3, 5), Fraction(17, 10)]


@st.composite
def supports(draw, max_points=12, max_entry=12):
    dim = draw(st.sampled_from([2, 3]))
    pts = draw(st.lists(st.tuples(*[st.integers(0, max_entry)] * dim), min_size=1,
                        max_size=max_points))
    pts = [p for p in pts if any(p)] or [(1,) * dim]
    return SupportSet(tuple(pts), dim)


rational_coord = st.fractions(min_value=0, max_value=14, max_denominator=4)


@settings(max_examples=40, deadline=None)
@given(supports(), st.lists(st.lists(rational_coord, min_size=3, max_size=3), min_size=20,
                            max_size=20))
def test_facets_agree_with_lp_oracle(s, probes):
    N = build_polyhedron(s)
    pts = list(s.points)
    d = newton_distance(N)
    assert d == newton_distance_lp(pts)
    extra = [[d] * s.dim, [d - Fraction(1, 64)] * s.dim]
    for t in [p[:s.dim] for p in probes] + extra:
        assert N.contains(t) == in_polyhedron(pts, t)


@settings(max_examples=40, deadline=None)
@given(supports())
def test_generators_satisfy_facets(s):
    N = build_polyhedron(s)
    for p in s.points:
        assert N.contains(p)
    for v in N.vertices:
        assert sum(1 for f in N.facets if f.tight(v)) >= s.dim
    for f in N.facets:
        assert all(w >= 0 for w in f.normal) and any(f.normal)


@settings(max_examples=40, deadline=None)
@given(supports())
def test_diagonal_point_on_boundary(s):
    N = build_polyhedron(s)
    d = newton_distance(N)
    diag = [d] * s.dim
    assert N.contains(diag)
    assert any(f.tight(diag) for f in N.facets)


@settings(max_examples=40, deadline=None)
@given(supports(), st.permutations([0, 1, 2]))
def test_permutation_equivariance(s, perm):
    perm = [p for p in perm if p < s.dim]
    N = build_polyhedron(s)
    moved = SupportSet(tuple(tuple(p[perm[i]] for i in range(s.dim)) for p in s.points), s.dim)
    M = build_polyhedron(moved)
    assert newton_distance(M) == newton_distance(N)
    permuted = {(tuple(f.normal[perm[i]] for i in range(s.dim)), f.offset) for f in N.facets}
    assert permuted == facets(M)


@settings(max_examples=40, deadline=None)
@given(supports(), st.tuples(st.integers(0, 12), st.integers(0, 12), st.integers(0, 12)))
def test_adding_point_never_increases_distance(s, extra):
    extra = extra[:s.dim]
    if not any(extra):
        return
    bigger = SupportSet(s.points + (extra,), s.dim)
    assert newton_distance(build_polyhedron(bigger)) <= newton_distance(build_polyhedron(s))
