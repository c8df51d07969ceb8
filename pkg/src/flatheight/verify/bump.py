"""Tensor bump ``eta(x) = prod_i b(x_i / r)`` with ``b(t) = exp(-1/(1-t^2))`` on ``|t| < 1``."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

# |b_hat(k)| < 1e-15 * b_hat(0) beyond this frequency (unit radius)
K_CUT = 1000.0
_TABLE_STEP = 0.02


def profile(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ti * ti))
    return out


@lru_cache(maxsize=1)
def _unit_table():
    # Samples of b on a fine grid, zero-padded so the DFT lands on a k-grid of step _TABLE_STEP.
    h = 1.0 / 4096
    length = 2 * np.pi / _TABLE_STEP
    m = int(round(length / h))
    t = (np.arange(m) - m // 2) * h
    samples = profile(t)
    spec = np.fft.fft(np.fft.ifftshift(samples)) * h      # sum b(t_j) e^{-i k t_j} h
    k = 2 * np.pi * np.fft.fftfreq(m, d=h)
    keep = (k >= 0) & (k <= K_CUT + 1)
    order = np.argsort(k[keep])
    kk, vals = k[keep][order], spec[keep][order].real     # b is even, so b_hat is real
    integral = float(samples.sum() * h)
    return CubicSpline(kk, vals), integral


@dataclass(frozen=True)
class BumpSpec:
    """Smooth compactly supported tensor bump centred at the origin."""

    radius: float = 1.0

    @property
    def integral_1d(self) -> float:
        return self.radius * _unit_table()[1]

    @property
    def integral(self) -> float:
        return self.integral_1d ** 3

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """``eta`` at points of shape (..., 3)."""
        x = np.asarray(x, dtype=float) / self.radius
        return profile(x[..., 0]) * profile(x[..., 1]) * profile(x[..., 2])

    def b(self, t: np.ndarray) -> np.ndarray:
        return profile(np.asarray(t, dtype=float) / self.radius)

    def ft(self, k) -> np.ndarray:
        """``b_hat(k) = int b(t/r) e^{ikt} dt`` (real, even); zero beyond the table cut-off."""
        k = np.abs(np.asarray(k, dtype=float)) * self.radius
        spline = _unit_table()[0]
        out = np.where(k <= K_CUT, spline(np.minimum(k, K_CUT)), 0.0)
        return self.radius * out

    @property
    def amplitude(self) -> float:
        return float(np.exp(-1.0) ** 3)
