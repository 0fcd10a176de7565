from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import firwin


@dataclass(frozen=True)
class FilterDesign:
    kind: str
    cutoff_hz: float
    fs: float
    taps: int
    window: str = "hamming"

    def __post_init__(self):
        if self.kind not in ("lowpass", "highpass"):
            raise ValueError(f"filter kind must be lowpass or highpass, got {self.kind!r}")
        if self.taps < 1 or self.taps % 2 == 0:
            raise ValueError(f"taps must be a positive odd number, got {self.taps}")
        if not 0 < self.cutoff_hz < self.fs / 2:
            raise ValueError(f"cutoff {self.cutoff_hz} Hz must lie in (0, {self.fs / 2}) Hz")
        if self.window != "hamming":
            raise ValueError("only the hamming window is supported")

    def kernel(self) -> np.ndarray:
        lp = firwin(self.taps, self.cutoff_hz, window=self.window, fs=self.fs)
        if self.kind == "lowpass":
            return lp
        # spectral inversion: delta minus lowpass
        hp = -lp
        hp[self.taps // 2] += 1.0
        return hp


def design_fir(kind: str, cutoff_hz: float, fs: float, taps: int) -> np.ndarray:
    """Hamming-windowed sinc FIR kernel, unit DC gain for lowpass."""
    return FilterDesign(kind, float(cutoff_hz), float(fs), int(taps)).kernel()


def frequency_response(kernel, xi_hz, fs: float):
    """Magnitude ``|Σ_n w_n e^{-2πj ξ n / fs}|`` of the kernel at ``xi_hz``."""
    w = np.asarray(kernel, dtype=np.float64).reshape(-1)
    xi = np.asarray(xi_hz, dtype=np.float64)
    phase = np.exp(-2j * np.pi * np.multiply.outer(xi / fs, np.arange(w.size)))
    b = np.abs(phase @ w)
    return float(b) if b.ndim == 0 else b


def analytic_sinusoid_output(a: float, b: float) -> float:
    """Pooled ReLU response ``a·b/π`` of a filter with gain b to a sinusoid of amplitude a."""
    if a < 0 or b < 0:
        raise ValueError("amplitude and gain must be nonnegative")
    return a * b / np.pi
