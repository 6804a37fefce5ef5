"""Named self-maps and equation right-hand sides usable from instance files."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from .contractions import MapUnderTest
from .metric import MetricSpace, Point, RejectedInput, euclidean, make_point, max_metric, squared


def affine_map(a: float, b=0.0, dimension: int = 1) -> MapUnderTest:
    """R(x) = a*x + b coordinate-wise; ``b`` is a scalar or a vector."""
    a = float(a)
    bv = np.broadcast_to(np.asarray(b, dtype=np.float64), (dimension,)).copy()
    bt = tuple(bv.tolist())

    def apply(x: Point) -> Point:
        return make_point(a * xi + bi for xi, bi in zip(x, bt))

    return MapUnderTest(f"affine(a={a})", dimension, apply,
                        vectorized=lambda X: a * X + bv)


def linear_map(matrix, offset=None) -> MapUnderTest:
    """R(x) = A x + c for a square matrix A."""
    A = np.asarray(matrix, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise RejectedInput("linear map needs a square matrix")
    d = A.shape[0]
    c = np.zeros(d) if offset is None else np.asarray(offset, dtype=np.float64)
    if c.shape != (d,):
        raise RejectedInput("offset length must match the matrix")

    def apply(x: Point) -> Point:
        return make_point(A @ np.asarray(x) + c)

    return MapUnderTest("linear", d, apply, vectorized=lambda X: X @ A.T + c)


def cos_map(amplitude: float = 1.0, shift: float = 0.0, domain=None,
            dimension: int = 1) -> MapUnderTest:
    """R(x) = amplitude*cos(clip(x)) + shift per coordinate.

    ``domain`` = (lo, hi) clamps inputs first, restricting the map to that
    interval.
    """
    amp, sh = float(amplitude), float(shift)
    lo, hi = (-math.inf, math.inf) if domain is None else (float(domain[0]), float(domain[1]))
    if lo > hi:
        raise RejectedInput("domain lower end exceeds upper end")

    def apply(x: Point) -> Point:
        return make_point(amp * math.cos(min(max(xi, lo), hi)) + sh for xi in x)

    return MapUnderTest(f"cos(amplitude={amp})", dimension, apply,
                        vectorized=lambda X: amp * np.cos(np.clip(X, lo, hi)) + sh)


def identity_map(dimension: int = 1) -> MapUnderTest:
    return MapUnderTest("identity", dimension, make_point, vectorized=lambda X: X.copy())


def _p(params, key, default=None):
    if key in params:
        return params[key]
    if default is None:
        raise RejectedInput(f"map parameter {key!r} is required")
    return default


MAP_FACTORIES: Dict[str, Callable[..., MapUnderTest]] = {
    "affine": lambda d, p: affine_map(_p(p, "a"), p.get("b", 0.0), d),
    "linear": lambda d, p: linear_map(_p(p, "matrix"), p.get("offset")),
    "cos": lambda d, p: cos_map(p.get("amplitude", 1.0), p.get("shift", 0.0),
                                p.get("domain"), d),
    "identity": lambda d, p: identity_map(d),
}

MAP_PARAMS = {
    "affine": {"a", "b"},
    "linear": {"matrix", "offset"},
    "cos": {"amplitude", "shift", "domain"},
    "identity": set(),
}


def map_by_name(name: str, dimension: int, params: dict | None = None) -> MapUnderTest:
    params = dict(params or {})
    if name not in MAP_FACTORIES:
        raise RejectedInput(f"unknown map {name!r}; expected one of {', '.join(MAP_FACTORIES)}")
    extra = set(params) - MAP_PARAMS[name]
    if extra:
        raise RejectedInput(f"unknown parameter(s) for map {name!r}: {', '.join(sorted(extra))}")
    m = MAP_FACTORIES[name](dimension, params)
    if m.dimension != dimension:
        raise RejectedInput(f"map {name!r} has dimension {m.dimension}, expected {dimension}")
    return m


# -- right-hand sides G(s, x) ----------------------------------------------

def _per_index_vectors(values, n: int, d: int, label: str) -> list:
    if len(values) != n:
        raise RejectedInput(f"{label} needs {n} entries, got {len(values)}")
    out = []
    for v in values:
        p = make_point(v)
        if len(p) == 1 and d > 1:
            p = p * d
        if len(p) != d:
            raise RejectedInput(f"{label} entries need {d} coordinates")
        out.append(p)
    return out


def affine_G(a: Sequence[float], c, dimension: int = 1):
    """G(s, x) = a[s]*x + c[s]."""
    n = len(a)
    a = [float(x) for x in a]
    if not all(math.isfinite(x) for x in a):
        raise RejectedInput("affine coefficients must be finite")
    cs = _per_index_vectors(c, n, dimension, "c")

    def G(s: int, x: Point) -> Point:
        return tuple(a[s] * xi + ci for xi, ci in zip(x, cs[s]))

    G.lipschitz = [abs(x) for x in a]
    return G


def scaled_cos_G(amplitude: Sequence[float], shift, dimension: int = 1):
    """G(s, x) = amplitude[s]*cos(x) + shift[s] per coordinate."""
    n = len(amplitude)
    amp = [float(x) for x in amplitude]
    sh = _per_index_vectors(shift, n, dimension, "shift")

    def G(s: int, x: Point) -> Point:
        return tuple(amp[s] * math.cos(xi) + ci for xi, ci in zip(x, sh[s]))

    G.lipschitz = [abs(x) for x in amp]
    return G


# -- reference contractions ------------------------------------------------

@dataclass(frozen=True)
class CatalogueEntry:
    """A map with a known admissible constant, starts and a box holding its fixed point."""

    name: str
    space: MetricSpace
    map: MapUnderTest
    kind: str
    lam: float
    starts: Tuple[Point, ...]
    box: Tuple[Tuple[float, float], ...]


def standard_contractions() -> list:
    A = [[0.5, 0.2], [-0.1, 0.4]]
    return [
        CatalogueEntry("halving", euclidean(), affine_map(0.5), "BANACH", 0.5,
                       ((1.0,), (-3.0,), (10.0,)), ((-2.0, 2.0),)),
        CatalogueEntry("quarter", euclidean(), affine_map(0.25), "BANACH", 0.25,
                       ((1.0,), (-2.0,), (7.5,)), ((-2.0, 2.0),)),
        CatalogueEntry("affine_offset", euclidean(), affine_map(0.3, 2.0), "BANACH", 0.3,
                       ((0.0,), (5.0,), (-4.0,)), ((0.0, 5.0),)),
        CatalogueEntry("cos", euclidean(), cos_map(domain=(0.54, 1.0)), "BANACH", 0.85,
                       ((0.54,), (0.8,), (1.0,)), ((0.54, 1.0),)),
        CatalogueEntry("half_cos", euclidean(), cos_map(0.5, 0.25), "BANACH", 0.5,
                       ((-1.0,), (0.3,), (2.0,)), ((-1.0, 1.0),)),
        CatalogueEntry("halving_squared", squared(), affine_map(0.5), "BANACH", 0.25,
                       ((1.0,), (-0.5,), (0.75,)), ((-1.0, 1.0),)),
        CatalogueEntry("linear2d", euclidean(2), linear_map(A), "BANACH", 0.55,
                       ((1.0, 1.0), (-2.0, 0.5), (3.0, -1.0)), ((-2.0, 2.0), (-2.0, 2.0))),
        CatalogueEntry("linear2d_max", max_metric(2), linear_map(A, [1.0, -1.0]), "BANACH", 0.7,
                       ((1.0, 1.0), (-2.0, 0.5), (3.0, -1.0)), ((-2.0, 2.0), (-2.0, 2.0))),
    ]
