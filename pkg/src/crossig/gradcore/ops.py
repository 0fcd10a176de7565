"""Forward and adjoint rules for every graph op.

Cotangent convention
--------------------
A real node carries ``d = dL/dv``.  A complex node carries the pair
``(a, b) = (dL/dv, dL/dv̄)`` of Wirtinger derivatives, propagated
independently so that the conjugate relation ``b == conj(a)`` at the leaves
is a check on the rules rather than an assumption.  A real parent of a
complex node receives ``real(a_contrib + b_contrib)``.
"""
from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _pull(node_c, parent_c, cot, fa, fb=None):
    # fa: transpose of the op's linearisation; fb: same with conjugated coefficients
    if fb is None:
        fb = fa
    if not node_c:
        return fa(cot)
    a, b = cot
    ga, gb = fa(a), fb(b)
    if parent_c:
        return ga, gb
    return np.real(ga + gb)


def _expand(val, pshape, oshape):
    if pshape == () and oshape != () and np.ndim(val) > 0:
        return val.reshape(val.shape + (1,) * len(oshape))
    return val


def _reducer(pshape, oshape):
    if pshape == () and oshape != ():
        axes = tuple(range(-len(oshape), 0))
        return lambda c: c.sum(axis=axes)
    return lambda c: c


# -- elementwise arithmetic ----------------------------------------------------

def _fwd_add(node, pnodes, vals):
    x, y = (_expand(v, p.shape, node.shape) for v, p in zip(vals, pnodes))
    return x + y


def _fwd_sub(node, pnodes, vals):
    x, y = (_expand(v, p.shape, node.shape) for v, p in zip(vals, pnodes))
    return x - y


def _vjp_addsub(sign):
    def vjp(node, pnodes, vals, out, cot):
        res = []
        for s, p in zip((1.0, sign), pnodes):
            red = _reducer(p.shape, node.shape)
            res.append(_pull(node.is_complex, p.is_complex, cot, lambda c, s=s, red=red: s * red(c)))
        return res
    return vjp


def _fwd_mul(node, pnodes, vals):
    x, y = (_expand(v, p.shape, node.shape) for v, p in zip(vals, pnodes))
    return x * y


def _vjp_mul(node, pnodes, vals, out, cot):
    ex = [_expand(v, p.shape, node.shape) for v, p in zip(vals, pnodes)]
    res = []
    for i, p in enumerate(pnodes):
        w = ex[1 - i]
        red = _reducer(p.shape, node.shape)
        res.append(_pull(node.is_complex, p.is_complex, cot,
                         lambda c, w=w, red=red: red(c * w),
                         lambda c, w=w, red=red: red(c * np.conj(w))))
    return res


def _fwd_scale(node, pnodes, vals):
    return node.params["c"] * vals[0]


def _vjp_scale(node, pnodes, vals, out, cot):
    c = node.params["c"]
    return [_pull(node.is_complex, pnodes[0].is_complex, cot,
                  lambda g: c * g, lambda g: np.conj(c) * g)]


# -- linear maps ---------------------------------------------------------------

def _matvec_apply(W, x, axis):
    xm = np.moveaxis(x, axis, -1)
    if W.ndim == 1:
        return xm @ W
    return np.moveaxis(xm @ W.T, -1, axis)


def _matvec_transpose(W, c, axis):
    if W.ndim == 1:
        return np.moveaxis(c[..., None] * W, -1, axis)
    return np.moveaxis(np.moveaxis(c, axis, -1) @ W, -1, axis)


def _fwd_matvec(node, pnodes, vals):
    return _matvec_apply(node.params["W"], vals[0], node.params["axis"])


def _vjp_matvec(node, pnodes, vals, out, cot):
    W, axis = node.params["W"], node.params["axis"]
    Wc = np.conj(W)
    return [_pull(node.is_complex, pnodes[0].is_complex, cot,
                  lambda c: _matvec_transpose(W, c, axis),
                  lambda c: _matvec_transpose(Wc, c, axis))]


def _conv_pad(K):
    left = (K - 1) // 2
    return left, K - 1 - left


def _fwd_conv1d(node, pnodes, vals):
    w = node.params["w"]
    x = vals[0]
    if node.params["squeeze"]:
        x = x[..., None, :]
    K = w.shape[-1]
    left, right = _conv_pad(K)
    pad = [(0, 0)] * (x.ndim - 1) + [(left, right)]
    win = sliding_window_view(np.pad(x, pad), K, axis=-1)  # (..., C_in, T, K)
    y = np.tensordot(win, w, axes=([-3, -1], [1, 2]))  # (..., T, C_out)
    return np.moveaxis(y, -1, -2)


def _vjp_conv1d(node, pnodes, vals, out, cot):
    w = node.params["w"]
    K = w.shape[-1]
    T = node.shape[-1]
    left, _ = _conv_pad(K)
    # g[..., i, t, k] = sum_o cot[..., o, t] * w[o, i, k]
    g = np.tensordot(cot, w, axes=([-2], [0]))  # (..., T, C_in, K)
    g = np.moveaxis(g, -3, -2)  # (..., C_in, T, K)
    xp = np.zeros(g.shape[:-2] + (T + K - 1,))
    for k in range(K):
        xp[..., k:k + T] += g[..., k]
    dx = xp[..., left:left + T]
    if node.params["squeeze"]:
        dx = dx[..., 0, :]
    return [dx]


def _fwd_relu(node, pnodes, vals):
    return np.maximum(vals[0], 0.0)


def _vjp_relu(node, pnodes, vals, out, cot):
    # subgradient 0 at the kink
    return [cot * (vals[0] > 0.0)]


def _fwd_gap(node, pnodes, vals):
    return vals[0].mean(axis=-1)


def _vjp_gap(node, pnodes, vals, out, cot):
    T = pnodes[0].shape[-1]
    fa = lambda c: np.repeat(c[..., None] / T, T, axis=-1)
    return [_pull(node.is_complex, pnodes[0].is_complex, cot, fa)]


def _fwd_sum(node, pnodes, vals):
    nd = len(pnodes[0].shape)
    return vals[0].sum(axis=tuple(range(-nd, 0))) if nd else vals[0]


def _fwd_mean(node, pnodes, vals):
    size = max(int(np.prod(pnodes[0].shape)), 1)
    return _fwd_sum(node, pnodes, vals) / size


def _broadcast_back(pshape, scale):
    def fa(c):
        return np.broadcast_to(c.reshape(c.shape + (1,) * len(pshape)) * scale,
                               c.shape + pshape).copy()
    return fa


def _vjp_sum(node, pnodes, vals, out, cot):
    p = pnodes[0]
    return [_pull(node.is_complex, p.is_complex, cot, _broadcast_back(p.shape, 1.0))]


def _vjp_mean(node, pnodes, vals, out, cot):
    p = pnodes[0]
    size = max(int(np.prod(p.shape)), 1)
    return [_pull(node.is_complex, p.is_complex, cot, _broadcast_back(p.shape, 1.0 / size))]


def _fwd_select(node, pnodes, vals):
    return vals[0][..., node.params["index"]]


def _vjp_select(node, pnodes, vals, out, cot):
    idx = node.params["index"]
    width = pnodes[0].shape[-1]

    def fa(c):
        g = np.zeros(c.shape + (width,), dtype=c.dtype)
        g[..., idx] = c
        return g
    return [_pull(node.is_complex, pnodes[0].is_complex, cot, fa)]


# -- complex plumbing ----------------------------------------------------------

def _fwd_real(node, pnodes, vals):
    return np.real(vals[0]).copy()


def _vjp_real(node, pnodes, vals, out, cot):
    if not pnodes[0].is_complex:
        return [cot]
    half = 0.5 * cot.astype(np.complex128)
    return [(half, half.copy())]


def _fwd_imag(node, pnodes, vals):
    if not pnodes[0].is_complex:
        return np.zeros_like(vals[0])
    return np.imag(vals[0]).copy()


def _vjp_imag(node, pnodes, vals, out, cot):
    if not pnodes[0].is_complex:
        return [np.zeros_like(cot)]
    return [(-0.5j * cot, 0.5j * cot)]


def _fwd_join(node, pnodes, vals):
    return vals[0] + 1j * vals[1]


def _vjp_join(node, pnodes, vals, out, cot):
    a, b = cot
    return [np.real(a + b), np.real(1j * (a - b))]


def _fwd_conj(node, pnodes, vals):
    return np.conj(vals[0])


def _vjp_conj(node, pnodes, vals, out, cot):
    if not node.is_complex:
        return [cot]
    a, b = cot
    return [(b, a)]


def _fwd_idft(node, pnodes, vals):
    return np.fft.ifft(vals[0], axis=-1, norm="ortho")


def _vjp_idft(node, pnodes, vals, out, cot):
    # the unitary IDFT matrix M is symmetric: M^T a = ifft(a), conj(M)^T b = fft(b)
    return [_pull(True, pnodes[0].is_complex, cot,
                  lambda c: np.fft.ifft(c, axis=-1, norm="ortho"),
                  lambda c: np.fft.fft(c, axis=-1, norm="ortho"))]


# -- holomorphic elementwise functions ------------------------------------------

def _elementwise(fn, deriv):
    def fwd(node, pnodes, vals):
        return fn(vals[0])

    def vjp(node, pnodes, vals, out, cot):
        h = deriv(vals[0], out)
        return [_pull(node.is_complex, pnodes[0].is_complex, cot,
                      lambda c: c * h, lambda c: c * np.conj(h))]
    return fwd, vjp


_fwd_sin, _vjp_sin = _elementwise(np.sin, lambda x, y: np.cos(x))
_fwd_cos, _vjp_cos = _elementwise(np.cos, lambda x, y: -np.sin(x))
_fwd_exp, _vjp_exp = _elementwise(np.exp, lambda x, y: y)


RULES = {
    "add": (_fwd_add, _vjp_addsub(1.0)),
    "sub": (_fwd_sub, _vjp_addsub(-1.0)),
    "mul": (_fwd_mul, _vjp_mul),
    "scale": (_fwd_scale, _vjp_scale),
    "matvec": (_fwd_matvec, _vjp_matvec),
    "conv1d": (_fwd_conv1d, _vjp_conv1d),
    "relu": (_fwd_relu, _vjp_relu),
    "gap": (_fwd_gap, _vjp_gap),
    "mean": (_fwd_mean, _vjp_mean),
    "sum": (_fwd_sum, _vjp_sum),
    "select": (_fwd_select, _vjp_select),
    "real": (_fwd_real, _vjp_real),
    "imag": (_fwd_imag, _vjp_imag),
    "join": (_fwd_join, _vjp_join),
    "conj": (_fwd_conj, _vjp_conj),
    "idft": (_fwd_idft, _vjp_idft),
    "sin": (_fwd_sin, _vjp_sin),
    "cos": (_fwd_cos, _vjp_cos),
    "exp": (_fwd_exp, _vjp_exp),
}
