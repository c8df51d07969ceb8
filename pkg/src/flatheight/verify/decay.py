"""Decay scans of ``J(lam * direction)`` and log-log exponent fits."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..algebra import Polynomial
from ..errors import InsufficientSamples, NoLinearWindow, ToleranceNotMet
from .bump import BumpSpec
from .oscillatory import eval_oscillatory

NORMAL = (0.0, 0.0, 0.0, 1.0)
CONE_DELTA = 0.1
MAX_REL_ERROR = 0.1
R2_MIN = 0.995
MIN_SAMPLES = 8
WINDOW_OCTAVES = 5            # a window holds at least 6 dyadic points


@dataclass
class DecaySamples:
    direction: tuple
    lambdas: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    points_per_octave: int = 4
    dropped: list = field(default_factory=list)       # (lambda, reason)

    def __post_init__(self):
        if np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("lambdas must be strictly increasing")

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.values)

    def rows(self) -> list[tuple]:
        return [(float(l), float(v.real), float(v.imag), float(abs(v)), float(e))
                for l, v, e in zip(self.lambdas, self.values, self.errors)]


@dataclass(frozen=True)
class FitResult:
    exponent: float
    log_flag_used: int
    stderr: float
    window: tuple
    r2: float
    n_points: int

    def as_dict(self) -> dict:
        return {"exponent": float(self.exponent), "log_flag_used": int(self.log_flag_used),
                "stderr": float(self.stderr), "window": [float(w) for w in self.window], "r2": float(self.r2),
                "n_points": int(self.n_points)}


def normalize(direction: Sequence[float]) -> tuple:
    v = np.asarray(direction, dtype=float)
    n = float(np.linalg.norm(v))
    if v.shape != (4,) or n == 0:
        raise ValueError("direction must be a nonzero vector in R^4")
    return tuple(float(t) for t in v / n)


def lambda_grid(lmin: float, lmax: float, points_per_octave: int) -> np.ndarray:
    k = np.arange(0, int(round(np.log2(lmax / lmin) * points_per_octave)) + 1)
    return lmin * 2.0 ** (k / points_per_octave)


def decay_scan(phi: Polynomial, bump: BumpSpec, direction: Sequence[float] = NORMAL,
               lmin: float = 2.0 ** 6, lmax: float = 2.0 ** 18, points_per_octave: int = 4,
               tol: float = 1e-6) -> DecaySamples:
    """Accepted samples of ``J`` along ``lam * direction``; unreliable points land in ``dropped``."""
    direction = normalize(direction)
    lams, vals, errs, dropped = [], [], [], []
    for lam in lambda_grid(lmin, lmax, points_per_octave):
        xi = [lam * t for t in direction]
        try:
            out = eval_oscillatory(phi, bump, xi, tol)
        except ToleranceNotMet as exc:
            dropped.append((float(lam), f"tolerance: {exc}"))
            continue
        if out.error >= MAX_REL_ERROR * abs(out.value):
            dropped.append((float(lam), f"below floor: |J| <= {out.error:.3e}"))
            continue
        lams.append(lam)
        vals.append(out.value)
        errs.append(out.error)
    return DecaySamples(direction, np.array(lams), np.array(vals, dtype=complex),
                        np.array(errs), points_per_octave, dropped)


def _regress(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    dof = max(len(x) - 2, 1)
    sxx = float(((x - x.mean()) ** 2).sum())
    stderr = float(np.sqrt(ss_res / dof / sxx)) if sxx > 0 else float("inf")
    return float(coef[0]), stderr, r2


def fit_decay(s: DecaySamples, log_flag: int = 0) -> FitResult:
    """Slope of ``log(|J| / (log lam)^log_flag)`` against ``log lam``.

    Windows span ``WINDOW_OCTAVES`` octaves of accepted samples; the one
    reaching the largest ``lam`` with ``R^2 >= R2_MIN`` wins.
    """
    if log_flag not in (0, 1):
        raise ValueError("log_flag must be 0 or 1")
    if len(s.lambdas) < MIN_SAMPLES:
        raise InsufficientSamples("not enough accepted samples", accepted=len(s.lambdas))
    x = np.log(s.lambdas)
    y = np.log(s.moduli)
    if log_flag:
        y = y - np.log(x)
    span = WINDOW_OCTAVES * np.log(2) * (1 - 1e-9)
    for hi in range(len(x) - 1, 0, -1):
        lo = np.searchsorted(x, x[hi] - span, side="right") - 1
        if lo < 0:
            break
        sl = slice(lo, hi + 1)
        if hi - lo + 1 < MIN_SAMPLES:
            continue
        slope, stderr, r2 = _regress(x[sl], y[sl])
        if r2 >= R2_MIN:
            return FitResult(slope, log_flag, stderr, (float(s.lambdas[lo]), float(s.lambdas[hi])),
                             r2, int(hi - lo + 1))
    raise NoLinearWindow("no window passes the linearity test", r2_min=R2_MIN)


def cone_directions(count: int = 8, delta: float = CONE_DELTA, seed: int = 20240601) -> list[tuple]:
    """Seeded unit vectors with ``|xi1| + |xi2| + |xi3| <= delta * xi4`` (so also the Euclidean bound)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        g = rng.standard_normal(3)
        g *= delta * rng.uniform(0.3, 1.0) / np.abs(g).sum()
        out.append(normalize([*g, 1.0]))
    return out


SUPER_DROP = 1e-8
SUPER_OCTAVES = 6             # lam^-a with a <= 4 cannot fall by SUPER_DROP within this range


def is_super_polynomial(s: DecaySamples, drop: float = SUPER_DROP,
                        octaves: float = SUPER_OCTAVES) -> bool:
    """True when ``|J|`` falls ``drop`` below its first accepted value within ``octaves`` octaves.

    Points dropped under the quadrature floor count with their floor bound.
    """
    if not len(s.lambdas):
        return False
    first_lam, first = s.lambdas[0], s.moduli[0]
    limit = first_lam * 2.0 ** octaves
    bounds = [(l, v) for l, v in zip(s.lambdas, s.moduli)]
    bounds += [(l, float(why.split("<=")[1])) for l, why in s.dropped if why.startswith("below floor")]
    return any(first_lam < l <= limit and v <= drop * first for l, v in bounds)


def fit_envelope(s: DecaySamples, log_flag: int = 0, octaves: int = WINDOW_OCTAVES + 1) -> FitResult:
    """Slope through per-octave maxima of ``|J|`` over the top ``octaves`` octaves.

    Used when interfering stationary points make ``|J|`` oscillate so no
    window is linear; ``R^2`` is reported but not enforced.
    """
    if len(s.lambdas) < MIN_SAMPLES:
        raise InsufficientSamples("not enough accepted samples", accepted=len(s.lambdas))
    x = np.log(s.lambdas)
    y = np.log(s.moduli) - (np.log(x) if log_flag else 0.0)
    block = np.floor((x[-1] - x) / np.log(2) + 1e-9).astype(int)
    xs, ys = [], []
    for k in range(octaves):
        sel = block == k
        if np.any(sel):
            j = np.flatnonzero(sel)[np.argmax(y[sel])]
            xs.append(x[j])
            ys.append(y[j])
    if len(xs) < 4:
        raise InsufficientSamples("too few octaves for an envelope fit", octaves=len(xs))
    slope, stderr, r2 = _regress(np.array(xs), np.array(ys))
    return FitResult(slope, log_flag, stderr, (float(np.exp(min(xs))), float(np.exp(max(xs)))),
                     r2, len(xs))


@dataclass(frozen=True)
class DirectionResult:
    direction: tuple
    kind: str                 # "power-law" | "envelope" | "super-polynomial"
    exponent: float           # -inf for super-polynomial decay
    fit: FitResult | None
    samples: DecaySamples


def directional_decay(phi: Polynomial, bump: BumpSpec, direction: Sequence[float], log_flag: int = 0,
                      **scan) -> DirectionResult:
    """Classify and fit the decay along one direction."""
    s = decay_scan(phi, bump, direction, **scan)
    if is_super_polynomial(s):
        return DirectionResult(s.direction, "super-polynomial", float("-inf"), None, s)
    try:
        fit = fit_decay(s, log_flag)
        kind = "power-law"
    except NoLinearWindow:
        fit = fit_envelope(s, log_flag)
        kind = "envelope"
    return DirectionResult(s.direction, kind, fit.exponent, fit, s)
