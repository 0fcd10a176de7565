"""Unitary DFT target domain.

The forward map is ``z_k = n^{-1/2} Σ_m x_m e^{-2πjkm/n}``.  The inverse is
``Re(unitary IDFT(z))``; the real part makes ``T⁻¹`` total on ℂⁿ, and it is
lossless on the straight line between spectra of two real signals.
"""
from __future__ import annotations

import numpy as np

from .base import TargetRepresentation, Transform, TransformError


def bin_frequencies(n: int, fs: float) -> np.ndarray:
    return np.arange(n) * (fs / n)


def _hz(f: float) -> str:
    return f"{f:.2f}Hz"


def dft_forward(x, fs: float = 1.0) -> TargetRepresentation:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 2:
        raise TransformError("dft_forward needs a real vector with n >= 2")
    z = np.fft.fft(x, norm="ortho")
    return TargetRepresentation("dft", z, tuple(_hz(f) for f in bin_frequencies(x.shape[0], fs)))


def dft_inverse_complex(z) -> np.ndarray:
    """Unitary IDFT before the real-part projection."""
    return np.fft.ifft(np.asarray(z, dtype=np.complex128), axis=-1, norm="ortho")


def dft_inverse(z) -> np.ndarray:
    if isinstance(z, TargetRepresentation):
        z = z.values
    return np.real(dft_inverse_complex(z)).copy()


def conjugate_pairs(n: int) -> list[tuple[int, ...]]:
    """Bins grouped as one-sided features: (0,), (k, n-k)..., and (n/2,) for even n."""
    groups: list[tuple[int, ...]] = [(0,)]
    for k in range(1, n // 2 + 1):
        groups.append((k,) if k == n - k else (k, n - k))
    return groups


def onesided(scores, fs: float = 1.0):
    """Merge conjugate bins by summing their scores; returns (freqs, merged)."""
    scores = np.asarray(scores)
    n = scores.shape[-1]
    groups = conjugate_pairs(n)
    merged = np.stack([scores[..., list(g)].sum(axis=-1) for g in groups], axis=-1)
    freqs = np.array([g[0] * fs / n for g in groups])
    return freqs, merged


class DFTTransform(Transform):
    kind = "dft"
    is_complex = True

    def __init__(self, n: int | None = None, fs: float = 1.0):
        if n is not None and n < 2:
            raise TransformError("dft needs n >= 2")
        self.n = n
        self.fs = float(fs)

    def _check(self, length):
        if self.n is not None and length != self.n:
            raise TransformError(f"dft transform built for n={self.n}, got {length}")

    def forward(self, x) -> TargetRepresentation:
        x = np.asarray(x, dtype=np.float64)
        self._check(x.shape[-1])
        return dft_forward(x, self.fs)

    def inverse(self, values) -> np.ndarray:
        values = np.asarray(values)
        self._check(values.shape[-1])
        return dft_inverse(values)

    def inverse_graph(self, builder, z):
        return builder.real(builder.idft(z))

    def target_shape(self, input_shape):
        if len(input_shape) != 1:
            raise TransformError("dft transform expects a single-channel signal")
        return tuple(input_shape)

    def labels(self, target_shape):
        return tuple(_hz(f) for f in bin_frequencies(target_shape[0], self.fs))

    def feature_groups(self, target_shape):
        n = target_shape[0]
        return [(_hz(g[0] * self.fs / n), np.array(g)) for g in conjugate_pairs(n)]

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "fs": self.fs}
