"""Cross-check: frequency-domain IG recovered from time-domain IG.

For ``T⁻¹(z) = Re(unitary IDFT(z))`` the Wirtinger IG of bin k equals
``(r_k/√N) Σ_n cos(2πkn/N + φ_k) · IG_n / Δx_n`` where ``r_k e^{jφ_k}`` is
the spectrum of ``Δx`` and ``IG_n / Δx_n`` is the path-averaged gradient.
"""
from __future__ import annotations

import warnings

import numpy as np

from ..transforms import DFTTransform
from .attribution import ig_classic, ig_complex_wirtinger
from .path import PathSpec

DEGENERATE_TOL = 1e-12


class DegenerateCoordinateWarning(UserWarning):
    pass


def redistribute_time_ig(ig_time, x, x_hat):
    """Map time-domain IG onto DFT bins; returns (scores, excluded indices)."""
    ig_time = np.asarray(ig_time, dtype=np.float64)
    dx = np.asarray(x, dtype=np.float64) - np.asarray(x_hat, dtype=np.float64)
    n = dx.shape[0]
    keep = np.abs(dx) > DEGENERATE_TOL
    excluded = np.flatnonzero(~keep)
    if not keep.any():
        raise ValueError("every coordinate has x == baseline; nothing to redistribute")
    if excluded.size:
        warnings.warn(f"excluded {excluded.size} coordinate(s) where x equals the baseline: "
                      f"{excluded.tolist()}", DegenerateCoordinateWarning, stacklevel=2)
    avg_grad = np.zeros(n)
    avg_grad[keep] = ig_time[keep] / dx[keep]
    dz = np.fft.fft(dx, norm="ortho")
    k = np.arange(n)
    phase = 2 * np.pi * np.outer(k, np.arange(n)) / n + np.angle(dz)[:, None]
    scores = np.abs(dz) / np.sqrt(n) * (np.cos(phase) * avg_grad * keep).sum(axis=1)
    return scores, excluded


def virtual_inspection_check(model, x, x_hat=None, n_steps: int = 256,
                             rule: str = "right_riemann", fs: float = 1.0) -> float:
    """Max |difference| over bins between redistributed time IG and Wirtinger IG."""
    x = np.asarray(x, dtype=np.float64)
    x_hat = np.zeros_like(x) if x_hat is None else np.asarray(x_hat, dtype=np.float64)
    ig_time = ig_classic(model, x, x_hat, n_steps, rule).scores
    redistributed, _ = redistribute_time_ig(ig_time, x, x_hat)
    dft = DFTTransform(n=x.shape[0], fs=fs)
    direct = ig_complex_wirtinger(model, dft, x, PathSpec(dft.forward(x_hat), n_steps, rule))
    return float(np.max(np.abs(redistributed - direct.scores)))
