"""Seeded random smooth graphs mixing real and complex leaves (no ReLU)."""
from __future__ import annotations

import numpy as np

from .graph import ComputeGraph, GraphBuilder


def _complex_layer(b, h, rng, width):
    W = (rng.normal(size=(width, h.shape[-1])) + 1j * rng.normal(size=(width, h.shape[-1])))
    # keep magnitudes O(1) so complex sin/exp stay tame across layers
    h = b.matvec(W / (2 * np.sqrt(2 * h.shape[-1])), h)
    choice = rng.integers(4)
    if choice == 0:
        return b.sin(h)
    if choice == 1:
        return b.exp(b.scale(h, 0.5))
    if choice == 2:
        return b.scale(b.mul(h, b.conj(h)), 0.5)
    return b.idft(b.mul(h, b.cos(h)))


def _real_layer(b, h, rng, width):
    W = rng.normal(size=(width, h.shape[-1])) / np.sqrt(h.shape[-1])
    h = b.add(b.matvec(W, h), rng.normal(size=width) * 0.1)
    choice = rng.integers(3)
    if choice == 0:
        return b.sin(h)
    if choice == 1:
        return b.cos(h)
    return b.exp(b.scale(h, -0.5))


def random_smooth_graph(seed: int, depth: int = 3):
    """Return ``(graph, bindings)`` with a real leaf ``x`` and complex leaf ``z``."""
    rng = np.random.default_rng(seed)
    m, k, width = rng.integers(2, 6), rng.integers(2, 6), int(rng.integers(2, 5))
    b = GraphBuilder()
    x = b.leaf("x", (m,))
    z = b.leaf("z", (k,), complex=True)
    hz, hx = z, x
    for _ in range(depth):
        hz = _complex_layer(b, hz, rng, width)
        hx = _real_layer(b, hx, rng, width)
    # cross the branches: complex join of real parts, then a non-holomorphic mix
    mixed = b.join(b.real(hz), hx)
    mixed = b.add(mixed, b.mul(hz, b.scale(b.imag(hz), 0.3)))
    out = b.sum(b.real(b.mul(mixed, b.conj(b.sin(b.scale(mixed, 0.5))))))
    out = b.add(out, b.mean(b.imag(b.exp(b.scale(hz, 0.2j)))))
    graph = b.build(out)
    bindings = {
        "x": rng.normal(size=m),
        "z": rng.normal(size=k) + 1j * rng.normal(size=k),
    }
    return graph, bindings


def random_complex_model(seed: int, n: int = 8) -> ComputeGraph:
    """Small real-input model f(x) used to exercise cross-domain attribution."""
    rng = np.random.default_rng(seed)
    width = int(rng.integers(3, 7))
    b = GraphBuilder()
    x = b.leaf("x", (n,))
    h = b.add(b.matvec(rng.normal(size=(width, n)) / np.sqrt(n), x), rng.normal(size=width) * 0.3)
    if rng.integers(2):
        h = b.relu(h)
    else:
        h = b.sin(h)
    h = b.matvec(rng.normal(size=(width, width)) / np.sqrt(width), h)
    h = b.exp(b.scale(b.cos(h), 0.5))
    return b.build(b.sum(h))
