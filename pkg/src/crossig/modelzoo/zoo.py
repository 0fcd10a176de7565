from __future__ import annotations

import numpy as np

from ..gradcore import ComputeGraph, GraphBuilder
from .filters import design_fir
from .spec import ModelSpec, conv1d, dense, global_avg_pool, relu, select_output

DEFAULT_FS = 32.0
DEFAULT_N = 128
DEFAULT_TAPS = 65
DEFAULT_CUTOFF = 2.5


def build_sinusoid_classifier(fs: float = DEFAULT_FS, cutoff_hz: float = DEFAULT_CUTOFF,
                              taps: int = DEFAULT_TAPS, n: int = DEFAULT_N) -> ModelSpec:
    """Two-channel conv → ReLU → global average pool; channel 1 lowpass, channel 2 highpass."""
    lp = design_fir("lowpass", cutoff_hz, fs, taps)
    hp = design_fir("highpass", cutoff_hz, fs, taps)
    meta = {"name": "sinusoid_classifier",
            "design": {"cutoff_hz": float(cutoff_hz), "taps": int(taps), "window": "hamming",
                       "channels": ["lowpass", "highpass"]}}
    return ModelSpec((conv1d(np.stack([lp, hp])), relu(), global_avg_pool()), n, fs, meta=meta)


def build_single_channel(fs: float, kernel, n: int, meta: dict | None = None) -> ModelSpec:
    kernel = np.asarray(kernel, dtype=np.float64).reshape(1, -1)
    return ModelSpec((conv1d(kernel), relu(), global_avg_pool(), select_output(0)), n, fs,
                     meta=meta or {"name": "single_channel"})


def channel_spec(classifier: ModelSpec, channel: int) -> ModelSpec:
    """Single-channel model cut from one filter of a conv classifier."""
    kernels = classifier.layers[0].params["kernels"]
    meta = dict(classifier.meta)
    meta["channel"] = int(channel)
    return build_single_channel(classifier.fs, kernels[channel], classifier.n, meta)


def classify(spec: ModelSpec, x) -> np.ndarray:
    """1-based class labels by channel argmax; exact ties go to channel 1."""
    out = spec.outputs(x)
    return np.argmax(out, axis=-1) + 1


def build_linear_model(weights, fs: float = 1.0, bias: float = 0.0) -> ModelSpec:
    weights = np.asarray(weights, dtype=np.float64)
    return ModelSpec((dense(weights, np.float64(bias)),), weights.shape[-1], fs,
                     meta={"name": "linear"})


def smooth_probe_graph(n: int = DEFAULT_N, fs: float = DEFAULT_FS, seed: int = 0) -> ComputeGraph:
    """Smooth, non-homogeneous model over a length-n signal.

    Filtered channels pass through a biased sine and a quadratic readout, so
    one-step quadrature is visibly wrong while fine quadrature converges.
    """
    rng = np.random.default_rng(seed)
    kernels = np.stack([design_fir("lowpass", 2.5, fs, 33), design_fir("highpass", 2.5, fs, 33)])
    b = GraphBuilder()
    x = b.leaf("x", (n,))
    h = b.conv1d(x, kernels)
    h = b.sin(b.add(h, rng.normal(size=(2, n)) * 0.2 + 0.5))
    pooled = b.global_avg_pool(b.mul(h, h))
    mixed = b.add(b.matvec(rng.normal(size=(3, 2)), pooled), rng.normal(size=3) * 0.1)
    return b.build(b.sum(b.exp(b.scale(b.cos(mixed), 0.5))))
