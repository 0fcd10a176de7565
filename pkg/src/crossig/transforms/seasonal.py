# Classical additive seasonal-trend decomposition as a linear transform
# x -> (trend, seasonal, residual); the inverse is the exact sum.
from __future__ import annotations

import numpy as np

from .base import TargetRepresentation, Transform, TransformError

COMPONENTS = ("trend", "seasonal", "residual")


def _trend_weights(period: int) -> np.ndarray:
    if period % 2:
        return np.full(period, 1.0 / period)
    w = np.full(period + 1, 1.0 / period)
    w[0] = w[-1] = 0.5 / period
    return w


def _check(n: int, period: int):
    if period < 2:
        raise TransformError("period must be at least 2")
    if n < 2 * period:
        raise TransformError(f"series length {n} must be at least twice the period {period}")


def stl_decompose(x, period: int) -> TargetRepresentation:
    """Split ``x`` (last axis = time) into trend, seasonal and residual rows.

    Trend is a centred moving average over one period, with the ends padded
    by point reflection so straight lines pass through unchanged.  Seasonal
    is the zero-mean per-phase average of the detrended series, tiled.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    period = int(period)
    _check(n, period)
    w = _trend_weights(period)
    half = len(w) // 2
    pad = [(0, 0)] * (x.ndim - 1) + [(half, half)]
    xp = np.pad(x, pad, mode="reflect", reflect_type="odd")
    trend = np.lib.stride_tricks.sliding_window_view(xp, len(w), axis=-1) @ w
    detrended = x - trend
    phase = np.stack([detrended[..., p::period].mean(axis=-1) for p in range(period)], axis=-1)
    phase -= phase.mean(axis=-1, keepdims=True)
    seasonal = phase[..., np.arange(n) % period]
    residual = x - trend - seasonal
    values = np.stack([trend, seasonal, residual], axis=-2)
    return TargetRepresentation("seasonal_trend", values, COMPONENTS)


def stl_inverse(components) -> np.ndarray:
    if isinstance(components, TargetRepresentation):
        components = components.values
    components = np.real(np.asarray(components, dtype=np.float64))
    if components.ndim < 2 or components.shape[-2] != 3:
        raise TransformError(f"expected (..., 3, n) components, got {components.shape}")
    return components.sum(axis=-2)


class SeasonalTrendTransform(Transform):
    kind = "seasonal_trend"

    def __init__(self, period: int, fs: float | None = None):
        if int(period) < 2:
            raise TransformError("period must be at least 2")
        self.period = int(period)
        self.fs = fs

    def forward(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1:
            raise TransformError("seasonal-trend transform expects a single-channel signal")
        return stl_decompose(x, self.period)

    def inverse(self, values):
        return stl_inverse(values)

    def inverse_graph(self, builder, z):
        return builder.matvec(np.ones(3), z, axis=-2)

    def target_shape(self, input_shape):
        if len(input_shape) != 1:
            raise TransformError("seasonal-trend transform expects a single-channel signal")
        _check(input_shape[0], self.period)
        return (3, input_shape[0])

    def input_shape(self, target_shape):
        return (target_shape[-1],)

    def labels(self, target_shape):
        return COMPONENTS

    def to_dict(self):
        return {"kind": self.kind, "period": self.period, "fs": self.fs}
