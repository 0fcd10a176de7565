"""Evaluation and reverse-mode differentiation of :class:`ComputeGraph`.

Bindings may carry one or more leading batch axes (shared by all leaves); the
output then has that batch shape and gradients are per batch element.  All
state is local to a call, so one graph can be evaluated from many threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .graph import ComputeGraph, GraphError, NonFiniteError, ShapeMismatchError, UnboundLeafError
from .ops import RULES


def _bind(graph: ComputeGraph, bindings: Mapping[str, object]):
    extra = set(bindings) - set(graph.leaves)
    if extra:
        raise GraphError(f"unknown leaves: {sorted(extra)}")
    values = {}
    batch = None
    for name, idx in graph.leaves.items():
        if name not in bindings:
            raise UnboundLeafError(f"leaf {name!r} is not bound")
        node = graph.nodes[idx]
        arr = np.asarray(bindings[name])
        if node.is_complex:
            arr = arr.astype(np.complex128)
        else:
            if np.iscomplexobj(arr):
                raise ShapeMismatchError(f"leaf {name!r} is real but got complex data")
            arr = arr.astype(np.float64)
        nd = len(node.shape)
        if arr.ndim < nd or tuple(arr.shape[arr.ndim - nd:]) != node.shape:
            raise ShapeMismatchError(f"leaf {name!r} expects shape {node.shape}, got {arr.shape}")
        b = tuple(arr.shape[:arr.ndim - nd])
        if batch is None:
            batch = b
        elif b != batch:
            raise ShapeMismatchError(f"leaf {name!r} has batch shape {b}, expected {batch}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError(idx, "leaf")
        values[idx] = arr
    return values, (() if batch is None else batch)


def _forward(graph: ComputeGraph, bindings):
    leaf_vals, batch = _bind(graph, bindings)
    vals: list = [None] * len(graph.nodes)
    for i, node in enumerate(graph.nodes):
        if node.op == "leaf":
            vals[i] = leaf_vals[i]
            continue
        if node.op == "const":
            vals[i] = node.params["value"]
            continue
        fwd, _ = RULES[node.op]
        pnodes = [graph.nodes[p] for p in node.parents]
        # overflow is reported as NonFiniteError below, not as a numpy warning
        with np.errstate(over="ignore", invalid="ignore"):
            out = fwd(node, pnodes, [vals[p] for p in node.parents])
        if not np.all(np.isfinite(out)):
            raise NonFiniteError(i, node.op)
        vals[i] = out
    return vals, batch


def forward_eval(graph: ComputeGraph, bindings: Mapping[str, object]):
    """Evaluate the graph; returns a float, or an array over the batch axes."""
    vals, batch = _forward(graph, bindings)
    out = vals[graph.output]
    return float(out) if batch == () else np.asarray(out, dtype=np.float64)


@dataclass(frozen=True)
class LeafGradient:
    """Gradient of the scalar output with respect to one leaf.

    For a real leaf ``grad`` is ``df/dx``.  For a complex leaf ``grad`` is
    the Wirtinger derivative ``dg/dz = (dg/dp - j dg/dq) / 2`` and
    ``grad_conj`` is ``dg/dz̄``, computed by an independent adjoint pass.
    """

    name: str
    is_complex: bool
    grad: np.ndarray
    grad_conj: np.ndarray | None = None

    @property
    def dp(self) -> np.ndarray:
        if not self.is_complex:
            return self.grad
        return np.real(self.grad + self.grad_conj)

    @property
    def dq(self) -> np.ndarray:
        if not self.is_complex:
            return np.zeros_like(self.grad)
        return np.real(1j * (self.grad - self.grad_conj))

    def conjugate_symmetry_error(self) -> float:
        if not self.is_complex:
            return 0.0
        return float(np.max(np.abs(self.grad_conj - np.conj(self.grad)), initial=0.0))


@dataclass(frozen=True)
class GradientSet:
    value: float | np.ndarray
    leaves: Mapping[str, LeafGradient]

    def __getitem__(self, name: str) -> LeafGradient:
        return self.leaves[name]

    def conjugate_symmetry_error(self) -> float:
        return max((g.conjugate_symmetry_error() for g in self.leaves.values()), default=0.0)


def _accumulate(slot, contrib):
    if slot is None:
        return contrib
    if isinstance(slot, tuple):
        return slot[0] + contrib[0], slot[1] + contrib[1]
    return slot + contrib


def backward(graph: ComputeGraph, bindings: Mapping[str, object]) -> GradientSet:
    """Exact reverse-mode gradients of the output with respect to every leaf.

    Complex leaves report ``dg/dz`` itself, not its conjugate.  ReLU uses
    the subgradient 0 at exactly 0.
    """
    vals, batch = _forward(graph, bindings)
    cots: list = [None] * len(graph.nodes)
    cots[graph.output] = np.ones(batch)
    for i in range(len(graph.nodes) - 1, -1, -1):
        node = graph.nodes[i]
        cot = cots[i]
        if cot is None or node.op in ("leaf", "const") or not node.needs_grad:
            continue
        _, vjp = RULES[node.op]
        pnodes = [graph.nodes[p] for p in node.parents]
        contribs = vjp(node, pnodes, [vals[p] for p in node.parents], vals[i], cot)
        for p, pnode, c in zip(node.parents, pnodes, contribs):
            if pnode.needs_grad:
                cots[p] = _accumulate(cots[p], c)
        cots[i] = None
    leaves = {}
    for name, idx in graph.leaves.items():
        node = graph.nodes[idx]
        shape = batch + node.shape
        cot = cots[idx]
        if node.is_complex:
            if cot is None:
                cot = (np.zeros(shape, np.complex128), np.zeros(shape, np.complex128))
            leaves[name] = LeafGradient(name, True, np.asarray(cot[0], np.complex128),
                                        np.asarray(cot[1], np.complex128))
        else:
            g = np.zeros(shape) if cot is None else np.asarray(cot, np.float64)
            leaves[name] = LeafGradient(name, False, g)
    out = vals[graph.output]
    value = float(out) if batch == () else np.asarray(out, dtype=np.float64)
    return GradientSet(value, leaves)


def finite_difference_check(graph: ComputeGraph, bindings: Mapping[str, object],
                            eps: float = 1e-4) -> float:
    """Compare backward against central differences on every coordinate.

    Complex leaves are perturbed along p and q separately and compared with
    ``(dg/dp, dg/dq)``.  Returns the max absolute discrepancy divided by the
    largest gradient magnitude (1 if all gradients vanish).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    grads = backward(graph, bindings)
    if np.ndim(grads.value) != 0:
        raise ShapeMismatchError("finite_difference_check needs unbatched bindings")
    base = {k: np.asarray(v) for k, v in bindings.items()}
    worst = 0.0
    scale = 0.0
    for name in graph.leaves:
        node = graph.leaf(name)
        x0 = base[name].astype(np.complex128 if node.is_complex else np.float64)
        size = x0.size
        dirs = [1.0] + ([1j] if node.is_complex else [])
        analytic = [grads[name].dp, grads[name].dq][:len(dirs)]
        for direction, an in zip(dirs, analytic):
            if size == 0:
                continue
            steps = np.eye(size).reshape((size,) + x0.shape) * (eps * direction)
            batch = {}
            for other, v in base.items():
                other_node = graph.leaf(other)
                v = v.astype(np.complex128 if other_node.is_complex else np.float64)
                batch[other] = np.broadcast_to(v, (2 * size,) + v.shape)
            batch[name] = np.concatenate([x0 + steps, x0 - steps])
            f = forward_eval(graph, batch)
            fd = (f[:size] - f[size:]) / (2 * eps)
            an = np.asarray(an).reshape(-1)
            worst = max(worst, float(np.max(np.abs(fd - an))))
            scale = max(scale, float(np.max(np.abs(an))), float(np.max(np.abs(fd))))
    return worst / scale if scale > 0 else worst
