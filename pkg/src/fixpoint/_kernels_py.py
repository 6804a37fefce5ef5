"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and the same results; used when the extension is not built.
"""

from __future__ import annotations

import numpy as np


def _base(diff: np.ndarray, code: int, w: np.ndarray) -> np.ndarray:
    # diff has the coordinate axis last
    if code == 0:
        if diff.shape[-1] == 1:
            return np.abs(diff[..., 0])
        return np.sqrt(np.sum(diff * diff, axis=-1))
    if code == 1:
        return np.max(np.abs(diff), axis=-1)
    if code == 2:
        return np.sum(diff * diff, axis=-1)
    if code == 3:
        return np.any(diff != 0.0, axis=-1).astype(np.float64)
    return np.sum(w * np.abs(diff), axis=-1)


def pairwise_sup(X: np.ndarray, code: int, w: np.ndarray) -> np.ndarray:
    diff = X[:, None, :, :] - X[None, :, :, :]
    D = np.max(_base(diff, code, w), axis=-1)
    np.fill_diagonal(D, 0.0)
    return np.ascontiguousarray(np.maximum(D, D.T))


def rowwise_sup(X: np.ndarray, Y: np.ndarray, code: int, w: np.ndarray) -> np.ndarray:
    return np.max(_base(X - Y, code, w), axis=-1)


def first_triangle_violation(D: np.ndarray, rtol: float):
    D = np.asarray(D, dtype=np.float64)
    for a in range(D.shape[0]):
        lhs = D[a][None, :]
        # bad[b, c]: D[a,c] exceeds D[a,b] + D[b,c]
        bad = lhs - (D[a][:, None] + D) > rtol * lhs
        if bad.any():
            b, c = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return (a, int(b), int(c))
    return None
