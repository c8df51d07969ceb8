"""JSON encoding of analysis results.  Exact scalars are strings ``"p/q"`` (or ``[a, b, D]`` for ``a + b sqrt(D)``)."""
from __future__ import annotations

import math
import time
from fractions import Fraction

from .adapt import AdaptedChart, ExponentReport, HeightReport, LinearStep, TriangularStep, report_for
from .algebra import LinearMap, Polynomial, format_polynomial, parse, scalar_from_json, scalar_to_json
from .structure import Decomposition, HessianReport, decompose, decompose_with_matrix, hessian_vanishes

SCHEMA_VERSION = "1.0"


def _s(x):
    return scalar_to_json(x)


def _poly(p: Polynomial | None):
    return None if p is None else format_polynomial(p)


def matrix_to_json(A: LinearMap) -> list:
    return [[_s(x) for x in row] for row in A.entries]


def matrix_from_json(rows: list) -> LinearMap:
    return LinearMap([[scalar_from_json(x) for x in row] for row in rows])


def hessian_to_json(r: HessianReport) -> dict:
    return {"vanishes": r.vanishes,
            "witness": None if r.witness is None else [_s(x) for x in r.witness],
            "value": None if r.value is None else _s(r.value)}


def _mult(v):
    if v is None:
        return None
    return "inf" if v == math.inf else int(v)


def decomposition_to_json(d: Decomposition) -> dict:
    out = {"case": d.case, "A": matrix_to_json(d.A), "composed": _poly(d.composed)}
    if d.case == "OneVar":
        out.update(nu=d.nu, Q=_poly(d.Q))
    elif d.case == "TwoVar":
        out.update(psi=_poly(d.psi))
    else:
        out.update(Q1=_poly(d.Q1), Q2=_poly(d.Q2), Q3=_poly(d.Q3),
                   nu1=_mult(d.nu1), nu2=_mult(d.nu2), nu3=_mult(d.nu3))
    return out


def step_to_json(s) -> dict:
    if isinstance(s, LinearStep):
        return {"type": "linear", "matrix": matrix_to_json(s.matrix)}
    return {"type": "triangular", "target": s.target + 1, "source": s.source + 1,
            "shift": [[k, _s(c)] for k, c in s.shift], "truncated": s.truncated, "order": s.order}


def step_from_json(obj: dict):
    if obj["type"] == "linear":
        return LinearStep(matrix_from_json(obj["matrix"]))
    return TriangularStep(obj["target"] - 1, obj["source"] - 1,
                          tuple((int(k), scalar_from_json(c)) for k, c in obj["shift"]),
                          bool(obj.get("truncated", False)), obj.get("order"))


def chart_to_json(c: AdaptedChart) -> dict:
    return {"steps": [step_to_json(s) for s in c.steps], "final_poly": _poly(c.final_poly),
            "jet": _poly(c.jet), "truncated": c.truncated, "linearly_adapted": c.linearly_adapted}


def chart_from_json(obj: dict) -> AdaptedChart:
    jet = parse(obj["jet"]) if obj.get("jet") else None
    return AdaptedChart(tuple(step_from_json(s) for s in obj["steps"]), parse(obj["final_poly"]), jet)


def height_to_json(r: HeightReport) -> dict:
    return {"h": _s(r.h), "nu": r.nu, "case": r.case, "d_original": _s(r.d_original),
            "d_adapted": _s(r.d_adapted), "face_dim": r.face_dim, "face_dim_2d": r.face_dim_2d,
            "linearly_adapted": r.linearly_adapted, "truncated": r.truncated,
            "c": None if r.c is None else [_s(x) for x in r.c],
            "B": None if r.B is None else matrix_to_json(r.B), "notes": list(r.notes)}


def exponents_to_json(e: ExponentReport) -> dict:
    return {"beta": _s(e.beta), "log_flag": e.log_flag, "p_S": _s(e.p_S), "p_S_status": e.p_S_status,
            "indexes": {k: _s(v) for k, v in e.indexes.items()}, "hessian_rank": e.hessian_rank,
            "remarks": list(e.remarks)}


def analyze(phi: Polynomial, assume_matrix: LinearMap | None = None) -> dict:
    """Full pipeline as a JSON-ready dict; errors propagate for the caller to map to exit codes."""
    t0 = time.perf_counter()
    phi = phi if phi.nvars == 3 else phi.embed(3)
    if assume_matrix is not None:
        dec = decompose_with_matrix(phi, assume_matrix)
    else:
        dec = decompose(phi)
    t1 = time.perf_counter()
    hess = hessian_vanishes(phi)
    t2 = time.perf_counter()
    chart, hr, ex = report_for(phi, dec)
    t3 = time.perf_counter()
    return {
        "schema_version": SCHEMA_VERSION,
        "input": format_polynomial(phi),
        "case": dec.case,
        "subcase": hr.case,
        "h": _s(hr.h),
        "nu": hr.nu,
        "hessian": hessian_to_json(hess),
        "decomposition": decomposition_to_json(dec),
        "chart": chart_to_json(chart),
        "height": height_to_json(hr),
        "exponents": exponents_to_json(ex),
        "timings": {"decompose": t1 - t0, "hessian": t2 - t1, "adapt": t3 - t2},
    }


def check_report(report: dict) -> list[str]:
    """Internal consistency of a decoded report; returns the list of violations."""
    problems = []
    h = Fraction(report["h"])
    ex = report["exponents"]
    if Fraction(ex["beta"]) != 1 / h:
        problems.append("beta != 1/h")
    if ex["log_flag"] != report["nu"]:
        problems.append("log flag differs from nu")
    rank = ex["hessian_rank"]
    expected = h if (h >= 2 or rank == 0 or rank == 1) else Fraction(3, 2)
    if Fraction(ex["p_S"]) != expected:
        problems.append("p_S not recomputable from h and rank")
    chart = chart_from_json(report["chart"])
    if not chart.verify(parse(report["input"])):
        problems.append("chart does not replay to final_poly")
    return problems
