"""Kernel backend selection.

The compiled extension ``fixpoint._kernels`` is used when it was built;
otherwise the numpy implementation in ``fixpoint._kernels_py`` takes over.
"""

from __future__ import annotations

from types import ModuleType

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

METRIC_CODES = {"euclidean": 0, "max": 1, "squared": 2, "discrete": 3, "weighted_sum": 4}

_active: ModuleType = _compiled if _compiled is not None else _kernels_py


def available_backends() -> list[str]:
    return (["cython"] if _compiled is not None else []) + ["python"]


def backend() -> str:
    return "cython" if _active is _compiled else "python"


def use_backend(name: str) -> None:
    global _active
    if name == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif name == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")


def _weights(w, dim: int) -> np.ndarray:
    if w is None:
        return np.ones(dim, dtype=np.float64)
    return np.ascontiguousarray(w, dtype=np.float64)


def pairwise_sup(X: np.ndarray, code: int, w=None) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    return _active.pairwise_sup(X, code, _weights(w, X.shape[2]))


def rowwise_sup(X: np.ndarray, Y: np.ndarray, code: int, w=None) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    return _active.rowwise_sup(X, Y, code, _weights(w, X.shape[2]))


def first_triangle_violation(D: np.ndarray, rtol: float = 1e-12):
    D = np.ascontiguousarray(D, dtype=np.float64)
    return _active.first_triangle_violation(D, float(rtol))
