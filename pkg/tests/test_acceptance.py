"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from flatheight.adapt import report_for
from flatheight.algebra import LinearMap, Polynomial, compose_linear, hessian, hessian_det, parse
from flatheight.catalog import CATALOG
from flatheight.errors import NotDegenerate
from flatheight.lp import in_polyhedron, newton_distance_lp
from flatheight.newton import SupportSet, build_polyhedron, newton_distance
from flatheight.serialize import analyze, chart_from_json
from flatheight.structure import decompose
from flatheight.verify import (
    BumpSpec,
    cone_directions,
    directional_decay,
    eval_oscillatory,
    fit_sublevel,
    integrability_probe,
    sublevel_measure,
)

from generators import KINDS, canonical_instance, generic_polynomial, random_matrix

BUMP = BumpSpec()
DECAY_CASES = [  # (text, h, nu)
    ("x1^3", Fraction(3), 0),
    ("x1^4", Fraction(4), 0),
    ("x1^3+x1^2*x2+x1^4*x3", Fraction(2), 0),
    ("x1^2*x2^2", Fraction(2), 1),
]


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, detail: str, elapsed: float):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail} ({elapsed:.1f}s)")
        assert ok, detail
    return emit


def test_criterion_1_catalog(verdict):
    t0 = time.perf_counter()
    bad = []
    for e in CATALOG:
        rep = analyze(e.polynomial)
        steps = tuple((s["target"] - 1, s["source"] - 1, tuple((k, Fraction(c)) for k, c in s["shift"]))
                      for s in rep["chart"]["steps"] if s["type"] == "triangular")
        c = None if rep["height"]["c"] is None else tuple(Fraction(x) for x in rep["height"]["c"])
        ok = (Fraction(rep["h"]) == e.h and rep["nu"] == e.nu and rep["subcase"] == e.case
              and steps == e.chart and (e.c is None or c == e.c)
              and chart_from_json(rep["chart"]).verify(parse(rep["input"])))
        if not ok:
            bad.append(e.name)
    elapsed = time.perf_counter() - t0
    verdict(1, "catalog correctness", not bad and elapsed < 1.0,
            f"{len(CATALOG) - len(bad)}/{len(CATALOG)} entries exact, mismatches={bad}", elapsed)


def test_criterion_2_structure_round_trip(verdict):
    t0 = time.perf_counter()
    rng = random.Random(20240602)
    failures = []
    for i in range(50):
        kind = KINDS[i % 3]
        phi = compose_linear(canonical_instance(rng, kind), random_matrix(rng))
        if phi.is_zero():
            continue
        dec = decompose(phi)
        if not dec.verify(phi):
            failures.append(("shape", i))
    for i in range(50):
        phi = generic_polynomial(rng)
        try:
            decompose(phi)
            failures.append(("degenerate", i))
        except NotDegenerate as exc:
            w = [Fraction(x) for x in exc.diagnostics["witness"]]
            if hessian_det(phi).evaluate(w) == 0:
                failures.append(("witness", i))
    elapsed = time.perf_counter() - t0
    verdict(2, "structure round-trip", not failures and elapsed < 30.0,
            f"100 instances, failures={failures}", elapsed)


def test_criterion_3_newton_oracle(verdict):
    t0 = time.perf_counter()
    rng = random.Random(20240603)
    failures = []
    for i in range(100):
        dim = rng.choice([2, 3])
        pts = list({tuple(rng.randint(0, 12) for _ in range(dim)) for _ in range(rng.randint(1, 12))})
        pts = [p for p in pts if any(p)] or [(1,) * dim]
        N = build_polyhedron(SupportSet(tuple(pts), dim))
        d = newton_distance(N)
        if d != newton_distance_lp(pts):
            failures.append(("distance", i))
        probes = [[Fraction(rng.randint(0, 56), 4) for _ in range(dim)] for _ in range(10)]
        probes += [[d] * dim, [d - Fraction(1, 64)] * dim]
        if any(N.contains(t) != in_polyhedron(pts, t) for t in probes):
            failures.append(("membership", i))
    elapsed = time.perf_counter() - t0
    verdict(3, "Newton oracle equivalence", not failures and elapsed < 60.0,
            f"100 supports, failures={failures}", elapsed)


def test_criterion_4_decay_sharpness(verdict):
    t0 = time.perf_counter()
    parts, ok = [], True
    for text, h, nu in DECAY_CASES:
        res = directional_decay(parse(text), BUMP, (0, 0, 0, 1), nu)
        good = res.fit is not None and abs(res.exponent + 1 / float(h)) <= 0.07
        ok &= good
        parts.append(f"{text}: {res.exponent:.4f} vs {-1 / float(h):.4f}")
        if nu:
            plain = directional_decay(parse(text), BUMP, (0, 0, 0, 1), 0)
            good = plain.fit is not None and -0.5 < plain.exponent < -0.40
            ok &= good
            parts.append(f"{text} no-log: {plain.exponent:.4f} in (-0.5,-0.40)")
    elapsed = time.perf_counter() - t0
    verdict(4, "decay sharpness", ok and elapsed < 600.0, "; ".join(parts), elapsed)


def test_criterion_5_uniformity_envelope(verdict):
    t0 = time.perf_counter()
    parts, ok = [], True
    dirs = cone_directions()
    for text, h, _ in DECAY_CASES:
        phi = parse(text)
        worst = max(directional_decay(phi, BUMP, d).exponent for d in dirs)
        ok &= worst <= -1 / float(h) + 0.1
        parts.append(f"{text}: worst {worst:.3g} <= {-1 / float(h) + 0.1:.3f}")
    phi = parse("x1^3")
    j0 = abs(eval_oscillatory(phi, BUMP, (2.0 ** 6, 0, 0, 0)).value)
    far = eval_oscillatory(phi, BUMP, (2.0 ** 12, 0, 0, 0))
    tail = abs(far.value) + far.error
    ok &= tail < 1e-8 * j0
    parts.append(f"xi4=0: |J(2^12)|/|J(2^6)| <= {tail / j0:.2e}")
    elapsed = time.perf_counter() - t0
    verdict(5, "uniformity envelope", ok and elapsed < 600.0, "; ".join(parts), elapsed)


def test_criterion_6_integrability_dichotomy(verdict):
    t0 = time.perf_counter()
    bad = []
    worst = 0.0
    for e in CATALOG:
        s = sublevel_measure(e.polynomial, seed=0)
        a = fit_sublevel(s, e.nu).exponent
        worst = max(worst, abs(a - 1 / float(e.h)))
        up, _ = integrability_probe(e.polynomial, float(1.5 * e.h), h=e.h, nu=e.nu, samples=s)
        down, _ = integrability_probe(e.polynomial, float(0.75 * e.h), h=e.h, nu=e.nu, samples=s)
        if abs(a - 1 / float(e.h)) > 0.1 or up.verdict != "converges" or down.verdict != "diverges":
            bad.append((e.name, round(a, 4), up.verdict, down.verdict))
    elapsed = time.perf_counter() - t0
    verdict(6, "integrability dichotomy", not bad and elapsed < 300.0,
            f"max |a-1/h|={worst:.4f}, failures={bad}", elapsed)


def _chain_rule_holds(phi: Polynomial, A: LinearMap) -> bool:
    lhs = hessian(compose_linear(phi, A))
    H = [[compose_linear(hij, A) for hij in row] for row in hessian(phi)]
    a = A.entries
    for i in range(3):
        for j in range(3):
            rhs = Polynomial.zero(3)
            for k in range(3):
                for m in range(3):
                    rhs = rhs + H[k][m] * (a[k][i] * a[m][j])
            if lhs[i][j] != rhs:
                return False
    return True


def test_criterion_7_invariance(verdict):
    t0 = time.perf_counter()
    rng = random.Random(20240607)
    bad = []
    for e in CATALOG:
        for _ in range(20):
            phi = compose_linear(e.polynomial, random_matrix(rng))
            chart, hr, _ = report_for(phi, decompose(phi))
            if (hr.h, hr.nu) != (e.h, e.nu) or not chart.verify(phi):
                bad.append(e.name)
    chain_bad = 0
    for i in range(50):
        phi = (canonical_instance(rng, KINDS[i % 3]) if i % 2 else generic_polynomial(rng, 3))
        chain_bad += not _chain_rule_holds(phi, random_matrix(rng))
    elapsed = time.perf_counter() - t0
    verdict(7, "invariance", not bad and chain_bad == 0 and elapsed < 60.0,
            f"{20 * len(CATALOG)} precompositions, mismatches={sorted(set(bad))}, "
            f"chain-rule failures={chain_bad}/50", elapsed)
