"""Kernel evaluation, Gram matrices and the label-weighted matrix ``B``."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class KernelKind(str, enum.Enum):
    LINEAR = "linear"
    RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    """Which kernel to use and its parameters.

    ``gamma`` is the RBF width in ``exp(-gamma * ||x - z||^2)`` and is
    ignored for the linear kernel.
    """

    kind: KernelKind = KernelKind.RBF
    gamma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if self.kind is KernelKind.RBF and not self.gamma > 0:
            raise ValueError(f"RBF kernel needs gamma > 0, got {self.gamma}")

    @classmethod
    def linear(cls) -> "KernelSpec":
        return cls(KernelKind.LINEAR, 1.0)

    @classmethod
    def rbf(cls, gamma: float = 1.0) -> "KernelSpec":
        return cls(KernelKind.RBF, gamma)


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] < 1:
        raise ValueError(f"expected an (n, m) array of feature vectors, got shape {X.shape}")
    return X


def kernel_eval(spec: KernelSpec, x, z) -> float:
    """Kernel value ``K(x, z)`` for a single pair of vectors."""
    x = np.asarray(x, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    if x.shape != z.shape or x.size == 0:
        raise ValueError(f"dimension mismatch: {x.size} vs {z.size}")
    if spec.kind is KernelKind.LINEAR:
        return float(x @ z)
    d = x - z
    return float(np.exp(-spec.gamma * (d @ d)))


def cross_kernel(spec: KernelSpec, A, Z, chunk: int = 512) -> np.ndarray:
    """Matrix ``K(a_i, z_j)`` between the rows of ``A`` and the rows of ``Z``.

    RBF distances are formed from explicit differences rather than the
    ``|a|^2 + |z|^2 - 2 a.z`` expansion, so identical points give exactly 1.
    """
    A = _as_matrix(A)
    Z = _as_matrix(Z)
    if A.shape[1] != Z.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {Z.shape[1]}")
    if spec.kind is KernelKind.LINEAR:
        return A @ Z.T
    out = np.empty((A.shape[0], Z.shape[0]))
    for start in range(0, A.shape[0], chunk):
        block = A[start:start + chunk]
        diff = block[:, None, :] - Z[None, :, :]
        out[start:start + chunk] = np.exp(-spec.gamma * np.einsum("ijk,ijk->ij", diff, diff))
    return out


def gram_matrix(spec: KernelSpec, X) -> np.ndarray:
    """Dense ``n x n`` Gram matrix; the lower triangle mirrors the upper one."""
    X = _as_matrix(X)
    n = X.shape[0]
    K = np.empty((n, n))
    if spec.kind is KernelKind.LINEAR:
        for i in range(n):
            K[i, i:] = X[i:] @ X[i]
    else:
        for i in range(n):
            diff = X[i:] - X[i]
            K[i, i:] = np.exp(-spec.gamma * np.einsum("ij,ij->i", diff, diff))
    iu = np.triu_indices(n, 1)
    K[(iu[1], iu[0])] = K[iu]
    return K


def check_labels(y) -> np.ndarray:
    y = np.asarray(y, dtype=float).ravel()
    bad = ~np.isin(y, (-1.0, 1.0))
    if bad.any():
        raise ValueError(f"labels must be -1 or 1, got {y[bad][0]!r} at index {np.flatnonzero(bad)[0]}")
    return y


def b_matrix(K, y) -> np.ndarray:
    """``B[i, j] = y_i y_j K[i, j]``."""
    K = np.asarray(K, dtype=float)
    y = check_labels(y)
    if K.shape != (y.size, y.size):
        raise ValueError(f"Gram matrix of shape {K.shape} does not match {y.size} labels")
    return K * np.outer(y, y)
