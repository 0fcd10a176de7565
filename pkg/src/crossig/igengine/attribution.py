"""Integrated gradients of ``g = f ∘ T⁻¹`` along a straight path in the target domain.

Every path point is an independent forward and backward pass, so the path
is evaluated in batched chunks (optionally on a thread pool) and the
partial sums are reduced in chunk order, which keeps the result identical
for any worker count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..gradcore import ComputeGraph, GraphBuilder, backward, forward_eval
from ..transforms import IdentityTransform, TargetRepresentation, Transform, TransformError
from .path import PathSpec, quadrature
from .result import AttributionResult

ALGORITHMS = ("real", "split", "wirtinger")


def compose(model: ComputeGraph, transform: Transform, input_shape) -> ComputeGraph:
    """Graph of ``f ∘ T⁻¹`` with a single leaf ``z`` in the target domain."""
    b = GraphBuilder()
    z = b.leaf("z", transform.target_shape(tuple(input_shape)), complex=transform.is_complex)
    x = transform.inverse_graph(b, z)
    return b.build(b.inline(model, {"x": x}))


def baseline_zero(transform: Transform, shape) -> TargetRepresentation:
    """``T(0)`` for a signal of the given shape (an int means a 1-D signal)."""
    if isinstance(shape, (int, np.integer)):
        shape = (int(shape),)
    return transform.zero(tuple(shape))


def baseline_filtered(z: TargetRepresentation, keep_mask) -> TargetRepresentation:
    """Zero the features of ``z`` whose mask entry is False.

    The mask either matches ``z.values`` exactly or has one entry per
    feature (the first axis), applied across the remaining axes.
    """
    mask = np.asarray(keep_mask, dtype=bool)
    shape = z.values.shape
    if mask.shape == shape:
        full = mask
    elif mask.shape == shape[:1]:
        full = mask.reshape(shape[:1] + (1,) * (len(shape) - 1))
    else:
        raise ValueError(f"mask shape {mask.shape} matches neither {shape} nor {shape[:1]}")
    return z.with_values(np.where(full, z.values, 0))


def _path_sums(graph: ComputeGraph, z: np.ndarray, z_hat: np.ndarray, t, w, algorithm: str,
               chunk_size: int, workers: int):
    dz = z - z_hat
    starts = list(range(0, len(t), chunk_size))

    def chunk(start):
        ts, ws = t[start:start + chunk_size], w[start:start + chunk_size]
        pts = z_hat + ts.reshape((-1,) + (1,) * z.ndim) * dz
        grad = backward(graph, {"z": pts})["z"]
        wb = ws.reshape((-1,) + (1,) * z.ndim)
        if algorithm == "real":
            return np.sum(wb * grad.grad, axis=0)
        if algorithm == "split":
            return np.sum(wb * grad.dp, axis=0), np.sum(wb * grad.dq, axis=0)
        return np.sum(wb * grad.grad, axis=0)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, starts))
    else:
        parts = [chunk(s) for s in starts]
    total = parts[0]
    for p in parts[1:]:
        total = tuple(a + b for a, b in zip(total, p)) if isinstance(total, tuple) else total + p
    return total


def integrate_target(graph: ComputeGraph, z, z_hat, path: PathSpec, algorithm: str,
                     chunk_size: int = 256, workers: int = 1) -> np.ndarray:
    """Raw IG scores over the leaf ``z`` of ``graph``.

    ``real``: ``Δz · Σ w ∂g/∂z``.  ``split``: ``Δp · Σ w ∂g/∂p + Δq · Σ w ∂g/∂q``.
    ``wirtinger``: ``2 Re[Δz · Σ w ∂g/∂z]`` with the Wirtinger derivative
    taken directly from the engine, so no conjugation step is needed.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    leaf = graph.leaf("z")
    if algorithm == "real" and leaf.is_complex:
        raise TransformError("real-domain IG needs a real target domain")
    if algorithm != "real" and not leaf.is_complex:
        raise TransformError(f"{algorithm} IG needs a complex target domain")
    dtype = np.complex128 if leaf.is_complex else np.float64
    z = np.asarray(z, dtype=dtype)
    z_hat = np.asarray(z_hat, dtype=dtype)
    if z.shape != leaf.shape or z_hat.shape != leaf.shape:
        raise TransformError(f"target values must have shape {leaf.shape}")
    t, w = path.nodes()
    sums = _path_sums(graph, z, z_hat, t, w, algorithm, chunk_size, workers)
    dz = z - z_hat
    if algorithm == "real":
        return dz * sums
    if algorithm == "split":
        return dz.real * sums[0] + dz.imag * sums[1]
    return 2.0 * np.real(sums * dz)


def _target_points(transform: Transform, x, path: PathSpec):
    x = np.asarray(x, dtype=np.float64)
    z = transform.forward(x)
    base = path.baseline if path.baseline is not None else transform.zero(x.shape)
    if base.domain != transform.kind:
        raise TransformError(f"baseline domain {base.domain!r} does not match transform {transform.kind!r}")
    if base.values.shape != z.values.shape:
        raise TransformError(f"baseline shape {base.values.shape} != target shape {z.values.shape}")
    return x, z, base


def attribute(model: ComputeGraph, transform: Transform, x, path: PathSpec | None = None,
              algorithm: str | None = None, chunk_size: int = 256,
              workers: int = 1) -> AttributionResult:
    """Cross-domain IG of ``model`` at ``x`` in the domain of ``transform``.

    ``algorithm`` defaults to ``real`` for real domains and ``wirtinger``
    for complex ones.
    """
    path = path or PathSpec()
    if algorithm is None:
        algorithm = "wirtinger" if transform.is_complex else "real"
    x, z, base = _target_points(transform, x, path)
    graph = compose(model, transform, x.shape)
    scores = integrate_target(graph, z.values, base.values, path, algorithm, chunk_size, workers)
    return AttributionResult(
        scores=scores, domain=transform.kind, labels=z.labels,
        f_input=forward_eval(graph, {"z": z.values}),
        f_baseline=forward_eval(graph, {"z": base.values}),
        n_steps=path.n_steps, rule=path.rule, algorithm=algorithm, transform=transform)


def ig_real_domain(model, transform, x, path=None, **kw) -> AttributionResult:
    if transform.is_complex:
        raise TransformError(f"{transform.kind} is a complex domain; use a complex IG variant")
    return attribute(model, transform, x, path, "real", **kw)


def ig_complex_split(model, transform, x, path=None, **kw) -> AttributionResult:
    if not transform.is_complex:
        raise TransformError(f"{transform.kind} is a real domain")
    return attribute(model, transform, x, path, "split", **kw)


def ig_complex_wirtinger(model, transform, x, path=None, **kw) -> AttributionResult:
    if not transform.is_complex:
        raise TransformError(f"{transform.kind} is a real domain")
    return attribute(model, transform, x, path, "wirtinger", **kw)


def ig_classic(model: ComputeGraph, x, baseline=None, n_steps: int = 64,
               rule: str = "right_riemann") -> AttributionResult:
    """Plain time-domain IG, evaluated one path point at a time on ``model``."""
    x = np.asarray(x, dtype=np.float64)
    x_hat = np.zeros_like(x) if baseline is None else np.asarray(baseline, dtype=np.float64)
    if x_hat.shape != x.shape:
        raise ValueError(f"baseline shape {x_hat.shape} != input shape {x.shape}")
    t, w = quadrature(n_steps, rule)
    acc = np.zeros_like(x)
    for ts, ws in zip(t, w):
        acc += ws * backward(model, {"x": x_hat + ts * (x - x_hat)})["x"].grad
    identity = IdentityTransform()
    return AttributionResult(
        scores=(x - x_hat) * acc, domain="identity", labels=identity.labels(x.shape),
        f_input=forward_eval(model, {"x": x}), f_baseline=forward_eval(model, {"x": x_hat}),
        n_steps=int(n_steps), rule=rule, algorithm="classic", transform=identity)
