"""Static computation graphs over real and complex tensors.

A graph is built once with :class:`GraphBuilder` and then frozen into an
immutable :class:`ComputeGraph`.  Every node stores its feature shape (the
shape without any leading batch axes) and whether it carries complex values.
Evaluation and differentiation live in :mod:`crossig.gradcore.engine`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graphs and bad bindings."""


class UnboundLeafError(GraphError):
    pass


class ShapeMismatchError(GraphError):
    pass


class NonFiniteError(ArithmeticError):
    """A node produced NaN or Inf during evaluation."""

    def __init__(self, node_index: int, op: str):
        super().__init__(f"non-finite value at node {node_index} ({op})")
        self.node_index = node_index
        self.op = op


# op name -> accepts complex inputs
_COMPLEX_OK = {
    "add": True, "sub": True, "mul": True, "scale": True, "matvec": True,
    "conv1d": False, "relu": False, "gap": True, "mean": True, "sum": True,
    "select": True, "real": True, "imag": True, "join": False, "conj": True,
    "idft": True, "sin": True, "cos": True, "exp": True,
}


def _freeze(value):
    if isinstance(value, np.ndarray):
        value = value.copy()
        value.setflags(write=False)
    return value


@dataclass(frozen=True)
class Node:
    op: str
    parents: tuple[int, ...]
    shape: tuple[int, ...]
    is_complex: bool
    params: Mapping[str, object] = field(default_factory=dict)
    needs_grad: bool = True


@dataclass(frozen=True)
class ComputeGraph:
    """Immutable DAG with named leaves and one real scalar output."""

    nodes: tuple[Node, ...]
    leaves: Mapping[str, int]
    output: int

    def __post_init__(self):
        for i, node in enumerate(self.nodes):
            if any(p >= i for p in node.parents):
                raise GraphError(f"node {i} references a later node")
        out = self.nodes[self.output]
        if out.shape != () or out.is_complex:
            raise GraphError("graph output must be a real scalar")
        object.__setattr__(self, "leaves", MappingProxyType(dict(self.leaves)))

    def leaf(self, name: str) -> Node:
        return self.nodes[self.leaves[name]]

    @property
    def leaf_names(self) -> tuple[str, ...]:
        return tuple(self.leaves)

    def __len__(self):
        return len(self.nodes)


class Ref:
    """Handle to a node inside a :class:`GraphBuilder`.

    Supports ``+``, ``-`` and ``*`` between handles, and with numeric constants.
    """

    __slots__ = ("builder", "index")

    def __init__(self, builder: "GraphBuilder", index: int):
        self.builder = builder
        self.index = index

    @property
    def node(self) -> Node:
        return self.builder._nodes[self.index]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.node.shape

    @property
    def is_complex(self) -> bool:
        return self.node.is_complex

    def __add__(self, other):
        return self.builder.add(self, other)

    def __radd__(self, other):
        return self.builder.add(other, self)

    def __sub__(self, other):
        return self.builder.sub(self, other)

    def __rsub__(self, other):
        return self.builder.sub(other, self)

    def __mul__(self, other):
        if np.isscalar(other):
            return self.builder.scale(self, other)
        return self.builder.mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __repr__(self):
        node = self.node
        kind = "complex" if node.is_complex else "real"
        return f"Ref({self.index}: {node.op}, {kind}{list(node.shape)})"


class GraphBuilder:
    """Incrementally record operations, then :meth:`build` a graph."""

    def __init__(self):
        self._nodes: list[Node] = []
        self._leaves: dict[str, int] = {}

    # -- recording ---------------------------------------------------------
    def _push(self, op, parents, shape, is_complex, params=None) -> Ref:
        parents = tuple(p.index for p in parents)
        for p in parents:
            pnode = self._nodes[p]
            if pnode.is_complex and not _COMPLEX_OK[op]:
                raise GraphError(f"op {op!r} does not accept complex inputs")
        needs = op == "leaf" or any(self._nodes[p].needs_grad for p in parents)
        frozen = {k: _freeze(v) for k, v in (params or {}).items()}
        node = Node(op, parents, tuple(int(s) for s in shape), bool(is_complex),
                    MappingProxyType(frozen), needs)
        self._nodes.append(node)
        return Ref(self, len(self._nodes) - 1)

    def _ref(self, value) -> Ref:
        if isinstance(value, Ref):
            if value.builder is not self:
                raise GraphError("handle belongs to a different builder")
            return value
        return self.const(value)

    def leaf(self, name: str, shape: Sequence[int], complex: bool = False) -> Ref:
        if name in self._leaves:
            raise GraphError(f"duplicate leaf {name!r}")
        ref = self._push("leaf", (), shape, complex, {"name": name})
        self._leaves[name] = ref.index
        return ref

    def const(self, value) -> Ref:
        arr = np.asarray(value)
        is_complex = np.iscomplexobj(arr)
        arr = arr.astype(np.complex128 if is_complex else np.float64)
        if not np.all(np.isfinite(arr)):
            raise GraphError("constants must be finite")
        return self._push("const", (), arr.shape, is_complex, {"value": arr})

    def _binary(self, op, a, b) -> Ref:
        a, b = self._ref(a), self._ref(b)
        if a.shape != b.shape and a.shape != () and b.shape != ():
            raise ShapeMismatchError(f"{op}: shapes {a.shape} and {b.shape}")
        shape = a.shape if a.shape != () else b.shape
        return self._push(op, (a, b), shape, a.is_complex or b.is_complex)

    def add(self, a, b) -> Ref:
        return self._binary("add", a, b)

    def sub(self, a, b) -> Ref:
        return self._binary("sub", a, b)

    def mul(self, a, b) -> Ref:
        return self._binary("mul", a, b)

    def scale(self, a, c) -> Ref:
        a = self._ref(a)
        c = complex(c) if np.iscomplexobj(c) else float(c)
        return self._push("scale", (a,), a.shape, a.is_complex or isinstance(c, complex),
                          {"c": c})

    def matvec(self, W, x, axis: int = -1) -> Ref:
        """Contract feature axis ``axis`` of ``x`` with the last axis of ``W``.

        A 2-D ``W`` of shape (m, k) maps that axis from length k to m; a 1-D
        ``W`` of length k removes the axis.
        """
        x = self._ref(x)
        W = np.asarray(W)
        W = W.astype(np.complex128 if np.iscomplexobj(W) else np.float64)
        nd = len(x.shape)
        if axis >= 0:
            axis -= nd
        if not -nd <= axis < 0:
            raise ShapeMismatchError(f"matvec axis {axis} out of range for {x.shape}")
        k = x.shape[axis]
        if W.ndim not in (1, 2) or W.shape[-1] != k:
            raise ShapeMismatchError(f"matvec: W {W.shape} vs axis length {k}")
        shape = list(x.shape)
        if W.ndim == 2:
            shape[axis] = W.shape[0]
        else:
            del shape[axis]
        return self._push("matvec", (x,), shape, x.is_complex or np.iscomplexobj(W),
                          {"W": W, "axis": axis})

    def conv1d(self, x, kernels) -> Ref:
        """'Same' zero-padded cross-correlation along the last axis.

        ``kernels`` has shape (C_out, C_in, K) for input (C_in, T), or
        (C_out, K) for a single-channel input of shape (T,).  Output is (C_out, T).
        """
        x = self._ref(x)
        w = np.asarray(kernels, dtype=np.float64)
        squeeze = len(x.shape) == 1
        if squeeze:
            if w.ndim != 2:
                raise ShapeMismatchError("1-D input needs kernels of shape (C_out, K)")
            w = w[:, None, :]
        in_channels = 1 if squeeze else (x.shape[0] if len(x.shape) == 2 else -1)
        if w.ndim != 3 or w.shape[1] != in_channels:
            raise ShapeMismatchError(f"conv1d: kernels {w.shape} vs input {x.shape}")
        return self._push("conv1d", (x,), (w.shape[0], x.shape[-1]), False,
                          {"w": w, "squeeze": squeeze})

    def _unary(self, op, x, shape=None, is_complex=None, params=None) -> Ref:
        x = self._ref(x)
        return self._push(op, (x,), x.shape if shape is None else shape,
                          x.is_complex if is_complex is None else is_complex, params)

    def relu(self, x) -> Ref:
        return self._unary("relu", x)

    def global_avg_pool(self, x) -> Ref:
        x = self._ref(x)
        if len(x.shape) < 1:
            raise ShapeMismatchError("global_avg_pool needs at least one axis")
        return self._unary("gap", x, shape=x.shape[:-1])

    def mean(self, x) -> Ref:
        return self._unary("mean", x, shape=())

    def sum(self, x) -> Ref:
        return self._unary("sum", x, shape=())

    def select(self, x, index: int) -> Ref:
        x = self._ref(x)
        if len(x.shape) < 1 or not 0 <= index < x.shape[-1]:
            raise ShapeMismatchError(f"select index {index} invalid for {x.shape}")
        return self._unary("select", x, shape=x.shape[:-1], params={"index": int(index)})

    def real(self, x) -> Ref:
        return self._unary("real", x, is_complex=False)

    def imag(self, x) -> Ref:
        return self._unary("imag", x, is_complex=False)

    def join(self, p, q) -> Ref:
        """Form ``p + j q`` from two real nodes."""
        p, q = self._ref(p), self._ref(q)
        if p.shape != q.shape:
            raise ShapeMismatchError(f"join: shapes {p.shape} and {q.shape}")
        return self._push("join", (p, q), p.shape, True)

    def conj(self, x) -> Ref:
        return self._unary("conj", x)

    def idft(self, x) -> Ref:
        """Unitary inverse DFT along the last axis (complex output)."""
        return self._unary("idft", x, is_complex=True)

    def sin(self, x) -> Ref:
        return self._unary("sin", x)

    def cos(self, x) -> Ref:
        return self._unary("cos", x)

    def exp(self, x) -> Ref:
        return self._unary("exp", x)

    # -- composition -------------------------------------------------------
    def inline(self, graph: ComputeGraph, bindings: Mapping[str, Ref]) -> Ref:
        """Copy ``graph`` into this builder, wiring its leaves to ``bindings``.

        Returns the handle of the copied output node.
        """
        remap: dict[int, int] = {}
        for i, node in enumerate(graph.nodes):
            if node.op == "leaf":
                name = node.params["name"]
                if name not in bindings:
                    raise UnboundLeafError(f"inline: leaf {name!r} not bound")
                ref = self._ref(bindings[name])
                if ref.shape != node.shape or ref.is_complex != node.is_complex:
                    raise ShapeMismatchError(
                        f"inline: leaf {name!r} expects {node.shape}"
                        f"{' complex' if node.is_complex else ''}, got {ref!r}")
                remap[i] = ref.index
                continue
            parents = tuple(remap[p] for p in node.parents)
            needs = any(self._nodes[p].needs_grad for p in parents)
            self._nodes.append(Node(node.op, parents, node.shape, node.is_complex,
                                    node.params, needs))
            remap[i] = len(self._nodes) - 1
        return Ref(self, remap[graph.output])

    def build(self, output: Ref) -> ComputeGraph:
        output = self._ref(output)
        return ComputeGraph(tuple(self._nodes), dict(self._leaves), output.index)
