from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..igengine import PathSpec, ig_complex_wirtinger
from ..modelzoo import analytic_sinusoid_output, build_single_channel, frequency_response
from ..transforms import DFTTransform, conjugate_pairs
from .datasets import sinusoid


@dataclass(frozen=True)
class SweepResult:
    freqs: np.ndarray
    ig_mass: np.ndarray
    response: np.ndarray
    analytic: np.ndarray
    pearson: float


def probe_frequencies(fs: float, n: int, count: int = 64) -> np.ndarray:
    """``count`` odd DFT bins of an n-point window, skipping DC and Nyquist."""
    bins = 2 * np.arange(count) + 1
    if bins[-1] >= n / 2:
        raise ValueError(f"{count} odd bins do not fit below Nyquist for n={n}")
    return bins * fs / n


def frequency_ig_sweep(kernel, fs: float, n: int = 256, count: int = 64, amplitude: float = 1.0,
                       n_steps: int = 32, rule: str = "right_riemann") -> SweepResult:
    """IG mass at the probe frequency's conjugate bins for pure cosines, vs the filter gain."""
    model = build_single_channel(fs, kernel, n).compile()
    dft = DFTTransform(n=n, fs=fs)
    freqs = probe_frequencies(fs, n, count)
    pairs = conjugate_pairs(n)
    mass = []
    for xi in freqs:
        k = int(round(xi * n / fs))
        res = ig_complex_wirtinger(model, dft, sinusoid(xi, 0.0, fs, n, amplitude),
                                   PathSpec(None, n_steps, rule))
        mass.append(res.scores[list(pairs[k])].sum())
    mass = np.array(mass)
    response = frequency_response(kernel, freqs, fs)
    analytic = np.array([analytic_sinusoid_output(amplitude, b) for b in response])
    return SweepResult(freqs, mass, response, analytic, float(np.corrcoef(mass, response)[0, 1]))
