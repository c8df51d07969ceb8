"""Sublevel measures ``|{x in U : |phi(x)| <= eps}|`` and the integrability probe for ``|phi|^(-1/p)``.

Cells of an adaptive tree over the variables ``phi`` uses are classified
per ``eps`` with an exact Taylor bound at the cell centre: fully inside,
fully outside, or undecided.  Undecided leaves are strata for Monte Carlo,
sampled in ``BATCHES`` independent batches whose spread gives the
confidence interval.  Idle variables contribute their interval length.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Sequence

import numpy as np
from scipy import stats

from ..algebra import Polynomial
from ..errors import BudgetExceeded, InsufficientSamples

BATCHES = 8
CI_LEVEL = 0.95
MAX_REL_HALF_WIDTH = 0.05
MAX_DEPTH = 48
MAX_CELLS = 2 ** 17
SAMPLES_PER_BATCH = 4
MAX_SAMPLES = 2 ** 23
FIT_DECADES = 3               # the sublevel fit uses the smallest-eps decades
DEFAULT_BOX = ((-1.0, 1.0),) * 3


@dataclass
class SublevelSamples:
    epsilons: np.ndarray          # increasing
    measures: np.ndarray
    half_widths: np.ndarray
    accepted: np.ndarray          # bool, half-width < 5% of the measure
    box_volume: float
    seed: int
    cells: int = 0
    samples: int = 0

    def rows(self) -> list[tuple]:
        return [(float(e), float(m), float(c)) for e, m, c in zip(self.epsilons, self.measures, self.half_widths)]


@dataclass(frozen=True)
class SublevelFit:
    exponent: float
    stderr: float
    log_flag_used: int
    window: tuple
    n_points: int


@dataclass(frozen=True)
class IntegrabilityVerdict:
    verdict: str                 # converges | diverges | inconclusive
    p: float
    fit: SublevelFit
    margin: float                # a*p - 1
    expected_exponent: Fraction | None = None
    boundary: bool = False
    notes: tuple = field(default_factory=tuple)

    def as_dict(self) -> dict:
        out = {"verdict": self.verdict, "p": self.p, "exponent": self.fit.exponent,
               "stderr": self.fit.stderr, "log_flag_used": self.fit.log_flag_used,
               "a_times_p": self.fit.exponent * self.p, "boundary": self.boundary,
               "notes": list(self.notes)}
        if self.expected_exponent is not None:
            e = self.expected_exponent
            out["expected_exponent"] = f"{e.numerator}/{e.denominator}"
        return out


def epsilon_grid(emin: float = 1e-6, emax: float = 1e-1, per_decade: int = 2) -> np.ndarray:
    k = int(round(np.log10(emax / emin) * per_decade))
    return emin * 10.0 ** (np.arange(k + 1) / per_decade)


class _Taylor:
    """Taylor coefficients of ``phi`` at arbitrary centres, restricted to the used variables."""

    def __init__(self, phi: Polynomial, used: list[int]):
        self.used = used
        terms = [([e[i] for i in used], float(c)) for e, c in phi.terms]
        self.alphas = np.array([a for a, _ in terms], dtype=int).reshape(-1, len(used))
        self.coeffs = np.array([c for _, c in terms])
        top = self.alphas.max(axis=0)
        self.betas = [b for b in product(*(range(t + 1) for t in top))
                      if any(np.all(self.alphas >= b, axis=1))]

    def value(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape[0])
        for a, c in zip(self.alphas, self.coeffs):
            out += c * np.prod(x ** a, axis=1)
        return out

    def bounds(self, centres: np.ndarray, half: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``phi(c)`` and ``R >= |phi(c + y) - phi(c)|`` for ``|y_i| <= half_i``."""
        val = self.value(centres)
        rem = np.zeros(centres.shape[0])
        for b in self.betas:
            if not any(b):
                continue
            t = np.zeros(centres.shape[0])
            for a, c in zip(self.alphas, self.coeffs):
                if np.all(a >= b):
                    w = c * np.prod([comb(int(ai), int(bi)) for ai, bi in zip(a, b)])
                    t += w * np.prod(centres ** (a - np.array(b)), axis=1)
            rem += np.abs(t) * np.prod(half ** np.array(b))
        return val, rem * (1 + 1e-12) + 1e-300


def _classify(val, rem, eps):
    inside = (np.abs(val)[:, None] + rem[:, None]) <= eps[None, :]
    outside = (np.abs(val)[:, None] - rem[:, None]) > eps[None, :]
    return inside, outside


def sublevel_measure(phi: Polynomial, box: Sequence[Sequence[float]] = DEFAULT_BOX,
                     eps_grid: Sequence[float] | None = None, seed: int = 0,
                     max_samples: int = MAX_SAMPLES) -> SublevelSamples:
    phi = phi if phi.nvars == 3 else phi.embed(3)
    box = np.array([[float(lo), float(hi)] for lo, hi in box])
    if box.shape != (3, 2) or np.any(box[:, 1] <= box[:, 0]):
        raise ValueError("box must be three intervals lo < hi")
    eps = np.sort(np.asarray(epsilon_grid() if eps_grid is None else eps_grid, dtype=float))
    volume = float(np.prod(box[:, 1] - box[:, 0]))
    used = [i for i in range(3) if phi.uses_variable(i)]
    idle_len = float(np.prod([box[i, 1] - box[i, 0] for i in range(3) if i not in used]))
    if not used:
        m = np.where(abs(float(phi.constant_term())) <= eps, volume, 0.0)
        return SublevelSamples(eps, m, np.zeros_like(m), np.ones(eps.shape, bool), volume, seed)
    tay = _Taylor(phi, used)
    k = len(used)
    lo = box[used, 0]
    width = box[used, 1] - box[used, 0]

    # Refine breadth-first while some cell is undecided for some eps.
    exact = np.zeros(eps.shape)
    centres = (lo + width / 2)[None, :]
    half = width / 2
    depth = 0
    offsets = np.array(list(product((-0.5, 0.5), repeat=k)))
    while True:
        val, rem = tay.bounds(centres, half)
        inside, outside = _classify(val, rem, eps)
        decided_all_in = inside[:, 0]                       # inside for the smallest eps, so for all
        cell_vol = float(np.prod(2 * half))
        exact += cell_vol * decided_all_in.sum()
        undecided = ~decided_all_in & ~outside[:, -1]        # not outside for the largest eps
        centres = centres[undecided]
        if depth >= MAX_DEPTH or len(centres) * 2 ** k > MAX_CELLS or len(centres) == 0:
            break
        half = half / 2
        centres = (centres[:, None, :] + offsets[None, :, :] * 2 * half).reshape(-1, k)
        depth += 1

    # Leaves: exact for eps where decided, Monte Carlo otherwise.
    val, rem = tay.bounds(centres, half) if len(centres) else (np.zeros(0), np.zeros(0))
    inside, outside = _classify(val, rem, eps)
    cell_vol = float(np.prod(2 * half))
    exact = exact + cell_vol * inside.sum(axis=0)
    mixed = ~inside & ~outside
    live = np.flatnonzero(mixed.any(axis=1))
    per_batch = SAMPLES_PER_BATCH
    rng_seq = np.random.SeedSequence(seed)
    batch_rngs = [np.random.default_rng(s) for s in rng_seq.spawn(BATCHES)]
    batch_est = np.zeros((BATCHES, len(eps)))
    samples = 0
    if len(live):
        per_batch = max(SAMPLES_PER_BATCH, max_samples // (BATCHES * len(live)))
        if BATCHES * per_batch * len(live) > max_samples:
            raise BudgetExceeded("too many undecided cells for the sample budget", cells=len(live))
        c_live, mixed_live = centres[live], mixed[live]
        chunk = max(1, 2 ** 18 // per_batch)
        for b, rng in enumerate(batch_rngs):
            for s in range(0, len(live), chunk):
                cc = c_live[s:s + chunk]
                for q in range(0, per_batch, 2 ** 18):
                    m = min(2 ** 18, per_batch - q)
                    u = rng.uniform(-1.0, 1.0, size=(len(cc), m, k))
                    x = (cc[:, None, :] + u * half).reshape(-1, k)
                    v = np.abs(tay.value(x)).reshape(len(cc), m)
                    frac = (v[:, :, None] <= eps[None, None, :]).sum(axis=1) / per_batch
                    batch_est[b] += (frac * mixed_live[s:s + chunk]).sum(axis=0) * cell_vol
        samples = BATCHES * per_batch * len(live)
    mc = batch_est.mean(axis=0)
    se = batch_est.std(axis=0, ddof=1) / np.sqrt(BATCHES)
    tcrit = float(stats.t.ppf(0.5 + CI_LEVEL / 2, BATCHES - 1))
    measures = (exact + mc) * idle_len
    half_widths = tcrit * se * idle_len
    accepted = (half_widths < MAX_REL_HALF_WIDTH * measures) & (measures > 0)
    return SublevelSamples(eps, measures, half_widths, accepted, volume, seed,
                           cells=len(centres), samples=samples)


def _slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    sxx = float(((x - x.mean()) ** 2).sum())
    dof = len(x) - 2
    stat = float(np.sqrt(float(resid @ resid) / dof / sxx)) if dof > 0 else 0.0
    return float(coef[0]), stat


def fit_sublevel(s: SublevelSamples, log_flag: int = 0, decades: float = FIT_DECADES) -> SublevelFit:
    """Slope of ``log(mu / log(1/eps)^log_flag)`` against ``log eps`` over the smallest accepted decades."""
    ok = s.accepted & (s.measures > 0)
    eps, mu = s.epsilons[ok], s.measures[ok]
    if len(eps) < 3:
        raise InsufficientSamples("too few accepted sublevel points", accepted=int(len(eps)))
    sel = eps <= eps[0] * 10.0 ** decades * (1 + 1e-9)
    if np.count_nonzero(sel) < 3:
        sel = np.arange(len(eps)) < 3
    x = np.log(eps[sel])
    y = np.log(mu[sel])
    if log_flag:
        y = y - np.log(-x)
    slope, stat = _slope(x, y)
    # Systematic terms: drift of the local slope across the window, and the
    # slope change the Monte Carlo half-widths at the window ends allow.
    half = (len(x) + 1) // 2
    drift = abs(_slope(x[:half], y[:half])[0] - _slope(x[-half:], y[-half:])[0]) if half >= 2 else 0.0
    rel = s.half_widths[ok][sel] / mu[sel]
    mc = float(rel[0] + rel[-1]) / float(x[-1] - x[0])
    stderr = float(np.sqrt(stat ** 2 + drift ** 2 + mc ** 2))
    return SublevelFit(slope, stderr, log_flag, (float(eps[sel][0]), float(eps[sel][-1])),
                       int(np.count_nonzero(sel)))


def integrability_probe(phi: Polynomial, p: float, box: Sequence[Sequence[float]] = DEFAULT_BOX,
                        h: Fraction | None = None, nu: int = 0, seed: int = 0,
                        eps_grid: Sequence[float] | None = None,
                        samples: SublevelSamples | None = None) -> tuple[IntegrabilityVerdict, SublevelSamples]:
    """Does ``int_U |phi|^(-1/p)`` converge?  Decided from the fitted sublevel exponent ``a``.

    ``a p > 1`` with margin ``3 p stderr`` means convergence, ``a p < 1`` with
    the same margin divergence; anything closer is inconclusive.  ``h`` and
    ``nu`` (when known) give the expected exponent ``1/h`` and the log factor.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    if samples is None:
        samples = sublevel_measure(phi, box, eps_grid, seed)
    fit = fit_sublevel(samples, nu)
    margin = fit.exponent * p - 1
    band = 3 * p * fit.stderr
    verdict = "converges" if margin > band else "diverges" if margin < -band else "inconclusive"
    notes = []
    boundary = h is not None and Fraction(p).limit_denominator(10 ** 6) == h
    if boundary:
        notes.append("p equals the height: the integral diverges at this boundary")
    expected = Fraction(1) / h if h is not None else None
    return IntegrabilityVerdict(verdict, float(p), fit, margin, expected, boundary, tuple(notes)), samples
