from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .prng import Stream

KIND_CODES = {"two_class_sinusoid": 1, "trend_seasonal": 2}


@dataclass(frozen=True)
class DatasetSpec:
    """Generator settings for one synthetic corpus.

    ``two_class_sinusoid`` uses ``class_means``/``class_stds`` for the tone
    frequency in Hz.  ``trend_seasonal`` draws alpha and the seasonal
    frequency uniformly from ``alpha_range`` and ``xi_range``.
    """

    kind: str = "two_class_sinusoid"
    fs: float = 32.0
    n: int = 128
    seed: int = 0
    class_means: tuple[float, float] = (1.0, 4.0)
    class_stds: tuple[float, float] = (0.5, 0.5)
    amplitude: float = 1.0
    alpha_range: tuple[float, float] = (4.0, 7.0)
    xi_range: tuple[float, float] = (3.0, 8.0)
    horizon: int = 128
    min_freq: float = 0.1

    def __post_init__(self):
        if self.kind not in KIND_CODES:
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        if self.fs <= 0 or self.n < 2:
            raise ValueError("need fs > 0 and n >= 2")
        if any(s < 0 for s in self.class_stds) or self.amplitude <= 0:
            raise ValueError("stds must be nonnegative and amplitude positive")
        if not 0 < self.alpha_range[0] <= self.alpha_range[1]:
            raise ValueError("alpha range must be positive")
        if self.min_freq >= self.fs / 2:
            raise ValueError("minimum frequency must lie below Nyquist")

    @classmethod
    def trend_seasonal(cls, seed: int = 0, **kw) -> "DatasetSpec":
        kw.setdefault("fs", 64.0)
        kw.setdefault("n", 512)
        return cls(kind="trend_seasonal", seed=seed, **kw)

    def config_hash(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class TwoClassSet:
    signals: np.ndarray
    labels: np.ndarray
    freqs: np.ndarray
    phases: np.ndarray
    spec: DatasetSpec = field(repr=False)

    def __len__(self):
        return len(self.labels)


def sinusoid(xi_hz: float, phi: float, fs: float, n: int, amplitude: float = 1.0) -> np.ndarray:
    t = np.arange(n) / fs
    return amplitude * np.cos(2 * np.pi * xi_hz * t + phi)


def _draw_freq(stream: Stream, mean: float, std: float, lo: float, hi: float) -> float:
    # normal draws can leave (lo, hi); redraw until inside
    for _ in range(10000):
        xi = stream.normal(mean, std)
        if lo < xi < hi:
            return xi
    raise RuntimeError("frequency distribution has no mass inside the allowed band")


def generate_two_class(spec: DatasetSpec, count: int) -> TwoClassSet:
    """``count`` samples per class, interleaved class 1, class 2, class 1, ...

    Sample ``i`` of class ``c`` uses its own stream keyed by (seed, c, i).
    """
    if spec.kind != "two_class_sinusoid":
        raise ValueError("generate_two_class needs a two_class_sinusoid spec")
    signals, labels, freqs, phases = [], [], [], []
    for i in range(int(count)):
        for c in (1, 2):
            s = Stream(spec.seed, KIND_CODES[spec.kind], c, i)
            xi = _draw_freq(s, spec.class_means[c - 1], spec.class_stds[c - 1],
                            spec.min_freq, spec.fs / 2)
            phi = 2 * math.pi * s.uniform()
            signals.append(sinusoid(xi, phi, spec.fs, spec.n, spec.amplitude))
            labels.append(c)
            freqs.append(xi)
            phases.append(phi)
    n = spec.n
    return TwoClassSet(np.array(signals).reshape(-1, n), np.array(labels, dtype=int),
                       np.array(freqs), np.array(phases), spec)


@dataclass(frozen=True)
class TrendSeasonalSeries:
    t: np.ndarray
    trend: np.ndarray
    seasonal: np.ndarray
    n: int
    alpha: float
    xi_hz: float
    phi: float

    @property
    def values(self) -> np.ndarray:
        return self.trend + self.seasonal

    @property
    def window(self) -> np.ndarray:
        """Model input: the first ``n`` samples."""
        return self.values[:self.n]

    @property
    def future(self) -> np.ndarray:
        """Ground truth for the forecast horizon."""
        return self.values[self.n:]


def generate_trend_seasonal(alpha: float, xi_hz: float, phi: float = 0.0, fs: float = 64.0,
                            n: int = 512, horizon: int = 128) -> TrendSeasonalSeries:
    """Exponential trend ``e^{t/alpha}`` plus two harmonics at xi and 2·xi."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    t = np.arange(n + horizon) / fs
    if t[-1] / alpha > 700:
        raise OverflowError(f"t/alpha reaches {t[-1] / alpha:.1f}; exp would overflow")
    trend = np.exp(t / alpha)
    seasonal = np.sin(2 * np.pi * xi_hz * t + phi) + np.sin(2 * np.pi * 2 * xi_hz * t + phi)
    return TrendSeasonalSeries(t, trend, seasonal, n, float(alpha), float(xi_hz), float(phi))


def generate_trend_seasonal_set(spec: DatasetSpec, count: int) -> list[TrendSeasonalSeries]:
    if spec.kind != "trend_seasonal":
        raise ValueError("generate_trend_seasonal_set needs a trend_seasonal spec")
    out = []
    for i in range(int(count)):
        s = Stream(spec.seed, KIND_CODES[spec.kind], i)
        lo, hi = spec.alpha_range
        alpha = lo + (hi - lo) * s.uniform()
        lo, hi = spec.xi_range
        xi = lo + (hi - lo) * s.uniform()
        phi = 2 * math.pi * s.uniform()
        out.append(generate_trend_seasonal(alpha, xi, phi, spec.fs, spec.n, spec.horizon))
    return out
