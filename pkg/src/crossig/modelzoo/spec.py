"""Layer-list model descriptions compiled to compute graphs.

Inputs are ``(n,)`` single-channel or ``(channels, n)`` signals.  ``conv1d``
is a same-length, zero-padded cross-correlation (identical to convolution
for the symmetric FIR kernels used here).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from ..gradcore import ComputeGraph, GraphBuilder, forward_eval

LAYER_TYPES = ("conv1d", "relu", "global_avg_pool", "dense", "select_output")


class ModelShapeError(ValueError):
    pass


@dataclass(frozen=True)
class Layer:
    type: str
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.type not in LAYER_TYPES:
            raise ModelShapeError(f"unknown layer type {self.type!r}")
        frozen = {}
        for k, v in dict(self.params).items():
            if k != "index":
                v = np.array(v, dtype=np.float64)
                v.setflags(write=False)
            frozen[k] = v
        object.__setattr__(self, "params", MappingProxyType(frozen))


def conv1d(kernels) -> Layer:
    return Layer("conv1d", {"kernels": kernels})


def relu() -> Layer:
    return Layer("relu")


def global_avg_pool() -> Layer:
    return Layer("global_avg_pool")


def dense(weights, bias=None) -> Layer:
    weights = np.asarray(weights, dtype=np.float64)
    if bias is None:
        bias = np.zeros(weights.shape[:1] if weights.ndim == 2 else ())
    return Layer("dense", {"weights": weights, "bias": bias})


def select_output(index: int) -> Layer:
    return Layer("select_output", {"index": int(index)})


def _out_shape(layer: Layer, shape: tuple[int, ...]) -> tuple[int, ...]:
    p = layer.params
    if layer.type == "conv1d":
        k = p["kernels"]
        if len(shape) == 1 and k.ndim == 2:
            return (k.shape[0], shape[0])
        if len(shape) == 2 and k.ndim == 3 and k.shape[1] == shape[0]:
            return (k.shape[0], shape[1])
        raise ModelShapeError(f"conv1d kernels {k.shape} do not fit input {shape}")
    if layer.type == "relu":
        return shape
    if layer.type == "global_avg_pool":
        if not shape:
            raise ModelShapeError("global_avg_pool needs a time axis")
        return shape[:-1]
    if layer.type == "dense":
        w, b = p["weights"], p["bias"]
        if len(shape) != 1 or w.shape[-1] != shape[0]:
            raise ModelShapeError(f"dense weights {w.shape} do not fit input {shape}")
        if b.shape != w.shape[:-1]:
            raise ModelShapeError(f"dense bias {b.shape} does not match weights {w.shape}")
        return w.shape[:-1]
    if len(shape) != 1 or not 0 <= p["index"] < shape[0]:
        raise ModelShapeError(f"select_output index {p['index']} out of range for {shape}")
    return ()


@dataclass(frozen=True)
class ModelSpec:
    layers: tuple[Layer, ...]
    n: int
    fs: float
    channels: int = 1
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "meta", MappingProxyType(dict(self.meta)))
        shapes = [self.input_shape]
        for layer in self.layers:
            shapes.append(_out_shape(layer, shapes[-1]))
        if len(shapes[-1]) > 1:
            raise ModelShapeError(f"model output must be a scalar or vector, got {shapes[-1]}")
        object.__setattr__(self, "_shapes", tuple(shapes))

    @property
    def input_shape(self) -> tuple[int, ...]:
        return (self.n,) if self.channels == 1 else (self.channels, self.n)

    @property
    def output_shape(self) -> tuple[int, ...]:
        return self._shapes[-1]

    @property
    def n_outputs(self) -> int:
        return 1 if self.output_shape == () else self.output_shape[0]

    def compile(self, output_index: int | None = None) -> ComputeGraph:
        """Graph with leaf ``x`` returning one scalar output.

        Vector-output models need ``output_index`` unless they have a single output.
        """
        b = GraphBuilder()
        h = b.leaf("x", self.input_shape)
        for layer in self.layers:
            p = layer.params
            if layer.type == "conv1d":
                h = b.conv1d(h, p["kernels"])
            elif layer.type == "relu":
                h = b.relu(h)
            elif layer.type == "global_avg_pool":
                h = b.global_avg_pool(h)
            elif layer.type == "dense":
                h = b.add(b.matvec(p["weights"], h), p["bias"])
            else:
                h = b.select(h, p["index"])
        if h.shape != ():
            if output_index is None and h.shape == (1,):
                output_index = 0
            if output_index is None:
                raise ModelShapeError(f"model has {self.n_outputs} outputs; pass output_index")
            if not 0 <= output_index < h.shape[0]:
                raise ModelShapeError(f"output_index {output_index} out of range")
            h = b.select(h, int(output_index))
        elif output_index not in (None, 0):
            raise ModelShapeError("scalar model only has output 0")
        return b.build(h)

    def outputs(self, x) -> np.ndarray:
        """All outputs for a signal or a batch of signals, shape (..., n_outputs)."""
        x = np.asarray(x, dtype=np.float64)
        if self.output_shape == ():
            return np.asarray(forward_eval(self.compile(), {"x": x}))[..., None]
        return np.stack([np.asarray(forward_eval(self.compile(i), {"x": x}))
                         for i in range(self.n_outputs)], axis=-1)

    def with_layers(self, layers) -> "ModelSpec":
        return ModelSpec(tuple(layers), self.n, self.fs, self.channels, dict(self.meta))
