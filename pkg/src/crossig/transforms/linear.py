"""Linear component domains ``s = W x`` with mixing matrix ``A = W⁻¹``.

Signals are (channel, time) arrays; components have the same layout.  The
ICA fit below is a symmetric FastICA with a tanh contrast, written out so
the convergence state is visible to callers.
"""
from __future__ import annotations

import warnings

import numpy as np

from .base import TargetRepresentation, Transform, TransformError

INVERSE_TOL = 1e-8


class SingularMatrixError(TransformError):
    pass


class ICAConvergenceWarning(UserWarning):
    pass


def _check_pair(W, A):
    eye = np.eye(W.shape[0])
    err = float(np.max(np.abs(W @ A - eye)))
    if err > INVERSE_TOL:
        raise SingularMatrixError(f"|W A - I|_inf = {err:.3e} exceeds {INVERSE_TOL:g}")
    return err


def linear_forward(x, W) -> TargetRepresentation:
    x = np.asarray(x, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != W.shape[1]:
        raise TransformError(f"expected ({W.shape[1]}, T) signal, got {x.shape}")
    return TargetRepresentation("linear", W @ x, tuple(f"IC{i}" for i in range(W.shape[0])))


def linear_inverse(s, A) -> np.ndarray:
    if isinstance(s, TargetRepresentation):
        s = s.values
    return np.matmul(np.asarray(A, dtype=np.float64), np.real(np.asarray(s)))


class LinearTransform(Transform):
    kind = "linear"

    def __init__(self, W, A=None, meta: dict | None = None):
        W = np.asarray(W, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise TransformError(f"unmixing matrix must be square, got {W.shape}")
        if A is None:
            if np.linalg.matrix_rank(W) < W.shape[0]:
                raise SingularMatrixError("unmixing matrix is singular")
            A = np.linalg.inv(W)
        A = np.asarray(A, dtype=np.float64)
        if A.shape != W.shape:
            raise TransformError(f"mixing matrix shape {A.shape} != {W.shape}")
        self.inverse_error = _check_pair(W, A)
        self.W, self.A = W, A
        self.meta = dict(meta or {})

    @property
    def n_components(self) -> int:
        return self.W.shape[0]

    @property
    def converged(self) -> bool:
        return self.meta.get("status", "ok") == "ok"

    def forward(self, x):
        return linear_forward(x, self.W)

    def inverse(self, values):
        return linear_inverse(values, self.A)

    def inverse_graph(self, builder, z):
        return builder.matvec(self.A, z, axis=-2)

    def target_shape(self, input_shape):
        if len(input_shape) != 2 or input_shape[0] != self.n_components:
            raise TransformError(f"expected ({self.n_components}, T) signal, got {tuple(input_shape)}")
        return tuple(input_shape)

    def labels(self, target_shape):
        return tuple(f"IC{i}" for i in range(target_shape[0]))

    def to_dict(self):
        return {"kind": self.kind, "W": self.W.tolist(), "A": self.A.tolist(), "meta": self.meta}


def amari_index(W, A_true) -> float:
    """Amari separation error of ``P = W A_true``; 0 iff P is a scaled permutation."""
    P = np.abs(np.asarray(W) @ np.asarray(A_true))
    n = P.shape[0]
    if n < 2:
        return 0.0
    rows = (P / P.max(axis=1, keepdims=True)).sum(axis=1) - 1
    cols = (P / P.max(axis=0, keepdims=True)).sum(axis=0) - 1
    return float((rows.sum() + cols.sum()) / (2 * n * (n - 1)))


def _sym_decorrelate(W):
    s, u = np.linalg.eigh(W @ W.T)
    s = np.clip(s, np.finfo(float).tiny, None)
    return (u * (1.0 / np.sqrt(s))) @ u.T @ W


def excess_kurtosis_z(s) -> np.ndarray:
    """Excess kurtosis of each row divided by its Gaussian standard error sqrt(24/T)."""
    s = np.asarray(s, dtype=np.float64)
    s = s - s.mean(axis=1, keepdims=True)
    var = (s ** 2).mean(axis=1)
    kurt = (s ** 4).mean(axis=1) / np.where(var > 0, var ** 2, 1.0) - 3.0
    return kurt / np.sqrt(24.0 / s.shape[1])


def fit_fastica(x, max_iter: int = 30000, tol: float = 1e-8, seed: int = 0,
                w_init=None, gaussian_z: float = 5.0) -> LinearTransform:
    """Fit an unmixing matrix to a (channel, time) recording.

    The data are centred and whitened symmetrically, and the rotation is
    found by fixed-point iteration with symmetric decorrelation.  The
    returned transform maps raw (uncentred) signals, so ``A`` reconstructs
    them exactly.  Non-convergence or fewer than ``c - 1`` clearly
    non-Gaussian components sets ``meta["status"]`` and emits
    :class:`ICAConvergenceWarning`.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise TransformError("fit_fastica expects a (channel, time) array")
    c, T = x.shape
    if T <= c:
        raise TransformError(f"need more samples than channels, got {x.shape}")
    xc = x - x.mean(axis=1, keepdims=True)
    cov = xc @ xc.T / T
    d, E = np.linalg.eigh(cov)
    if d.min() <= 1e-12 * max(d.max(), 1e-300):
        raise SingularMatrixError("recording covariance is rank deficient")
    K = (E / np.sqrt(d)) @ E.T
    xw = K @ xc

    if w_init is None:
        w_init = np.random.default_rng(seed).normal(size=(c, c))
    W = _sym_decorrelate(np.asarray(w_init, dtype=np.float64))
    converged = False
    n_iter = 0
    lim = np.inf
    for n_iter in range(1, int(max_iter) + 1):
        g = np.tanh(W @ xw)
        g_prime = (1.0 - g ** 2).mean(axis=1)
        W1 = _sym_decorrelate(g @ xw.T / T - g_prime[:, None] * W)
        lim = float(np.max(np.abs(np.abs(np.einsum("ij,ij->i", W1, W)) - 1.0)))
        W = W1
        if lim < tol:
            converged = True
            break

    unmix = W @ K
    kz = excess_kurtosis_z(unmix @ xc)
    n_nongauss = int(np.sum(np.abs(kz) > gaussian_z))
    status = "ok"
    if not converged:
        status = "not_converged"
    elif n_nongauss < c - 1:
        status = "unidentifiable"
    meta = {
        "algorithm": "fastica", "contrast": "tanh", "seed": int(seed), "max_iter": int(max_iter),
        "tol": float(tol), "n_iter": int(n_iter), "final_change": float(lim),
        "status": status, "kurtosis_z": [float(v) for v in kz],
    }
    if status != "ok":
        warnings.warn(f"FastICA status {status} after {n_iter} iterations", ICAConvergenceWarning,
                      stacklevel=2)
    return LinearTransform(unmix, meta=meta)
