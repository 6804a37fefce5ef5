"""Non-triangular metric spaces over finite-dimensional real points.

A :class:`MetricSpace` is a distance evaluator plus declared properties.  The
only axioms assumed are

* N1: ``d(u, u) == 0``
* N2: ``d(u, v) == d(v, u)``
* N3: a sequence cannot converge to two different limits,

and the triangle inequality is a *declared* property (``triangle_status``),
never assumed.  :func:`sup_metric` lifts a space on points to function tables
over a finite index set ``{0, ..., n-1}`` using the maximum over the index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels

Point = Tuple[float, ...]

DEFAULT_TOL = 1e-9
TRIANGLE_RTOL = 1e-12


class RejectedInput(ValueError):
    """Input violates the preconditions of an operation."""


class TriangleStatus(str, Enum):
    GLOBAL = "GLOBAL"
    ORBIT_ONLY = "ORBIT_ONLY"
    NONE = "NONE"
    UNKNOWN = "UNKNOWN"


def make_point(coords) -> Point:
    """Convert a number or a sequence of numbers into a validated Point."""
    if isinstance(coords, (int, float)):
        coords = (coords,)
    p = tuple(float(c) for c in coords)
    if not p:
        raise RejectedInput("a point needs at least one coordinate")
    if not all(math.isfinite(c) for c in p):
        raise RejectedInput(f"non-finite coordinate in {p}")
    return p


@dataclass(frozen=True)
class FunctionTable:
    """A function h: {0..n-1} -> X stored as its table of values."""

    values: Tuple[Point, ...]

    def __post_init__(self):
        vals = tuple(make_point(v) for v in self.values)
        if not vals:
            raise RejectedInput("a function table needs at least one entry")
        dims = {len(v) for v in vals}
        if len(dims) != 1:
            raise RejectedInput("function table entries have mixed dimensions")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values) -> "FunctionTable":
        return cls(tuple(values))

    @property
    def domain_size(self) -> int:
        return len(self.values)

    @property
    def dimension(self) -> int:
        return len(self.values[0])

    def __getitem__(self, s: int) -> Point:
        return self.values[s]

    def __len__(self) -> int:
        return len(self.values)

    def to_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64)


Element = Union[Point, FunctionTable]


@dataclass(frozen=True)
class MetricSpace:
    """A distance on points of ``dimension`` coordinates.

    When ``domain_size`` is set the elements are :class:`FunctionTable` objects
    with that many entries rather than bare points.  ``kernel`` names a
    catalogue metric the batch kernels understand; custom spaces leave it
    ``None`` and fall back to calling ``distance`` pairwise.  ``exact`` marks
    formula-defined metrics whose N1/N2 hold bit-for-bit.
    """

    name: str
    dimension: int
    distance: Callable[[Element, Element], float] = field(repr=False)
    triangle_status: TriangleStatus = TriangleStatus.UNKNOWN
    domain_size: Optional[int] = None
    kernel: Optional[str] = None
    weights: Optional[Tuple[float, ...]] = None
    exact: bool = False

    def __post_init__(self):
        if self.dimension < 1:
            raise RejectedInput("dimension must be positive")
        if self.domain_size is not None and self.domain_size < 1:
            raise RejectedInput("domain_size must be positive")

    @property
    def is_lifted(self) -> bool:
        return self.domain_size is not None

    def check_element(self, u: Element) -> None:
        if self.is_lifted:
            if not isinstance(u, FunctionTable):
                raise RejectedInput(f"{self.name} expects function tables")
            if u.domain_size != self.domain_size or u.dimension != self.dimension:
                raise RejectedInput(
                    f"table of shape ({u.domain_size}, {u.dimension}) does not match "
                    f"({self.domain_size}, {self.dimension})"
                )
        else:
            if isinstance(u, FunctionTable) or len(u) != self.dimension:
                raise RejectedInput(
                    f"{self.name} expects points with {self.dimension} coordinates"
                )

    def __call__(self, u: Element, v: Element) -> float:
        return eval_metric(self, u, v)

    def to_array(self, elements: Sequence[Element]) -> np.ndarray:
        """Stack elements into a (count, domain_size, dimension) array."""
        if self.is_lifted:
            return np.array([e.values for e in elements], dtype=np.float64)
        return np.array(elements, dtype=np.float64)[:, None, :]

    def distance_matrix(self, elements: Sequence[Element]) -> np.ndarray:
        for e in elements:
            self.check_element(e)
        if self.kernel is not None:
            return kernels.pairwise_sup(
                self.to_array(elements), kernels.METRIC_CODES[self.kernel], self.weights
            )
        m = len(elements)
        D = np.zeros((m, m))
        for i in range(m):
            for j in range(m):
                if i != j:
                    D[i, j] = self.distance(elements[i], elements[j])
        return D

    def distances_to(self, xs: Sequence[Element], ys: Sequence[Element]) -> np.ndarray:
        """Row-wise distances d(xs[i], ys[i])."""
        if self.kernel is not None:
            return kernels.rowwise_sup(
                self.to_array(xs), self.to_array(ys),
                kernels.METRIC_CODES[self.kernel], self.weights,
            )
        return np.array([self.distance(x, y) for x, y in zip(xs, ys)])


def eval_metric(space: MetricSpace, u: Element, v: Element) -> float:
    space.check_element(u)
    space.check_element(v)
    d = float(space.distance(u, v))
    if not (math.isfinite(d) and d >= 0.0):
        raise RejectedInput(f"{space.name} returned an invalid distance {d!r}")
    return d


# -- catalogue -------------------------------------------------------------

def _euclidean(u, v):
    return math.dist(u, v)


def _max(u, v):
    return max(abs(a - b) for a, b in zip(u, v))


def _squared(u, v):
    return sum((a - b) * (a - b) for a, b in zip(u, v))


def _discrete(u, v):
    return 0.0 if tuple(u) == tuple(v) else 1.0


_CATALOGUE = {
    "euclidean": (_euclidean, TriangleStatus.GLOBAL),
    "max": (_max, TriangleStatus.GLOBAL),
    "squared": (_squared, TriangleStatus.NONE),
    "discrete": (_discrete, TriangleStatus.GLOBAL),
}

METRIC_NAMES = tuple(_CATALOGUE)


def metric_by_name(name: str, dimension: int) -> MetricSpace:
    """Catalogue metric; names are case-sensitive."""
    try:
        fn, status = _CATALOGUE[name]
    except KeyError:
        raise RejectedInput(
            f"unknown metric {name!r}; expected one of {', '.join(METRIC_NAMES)}"
        ) from None
    return MetricSpace(name, dimension, fn, status, kernel=name, exact=True)


def euclidean(dimension: int = 1) -> MetricSpace:
    return metric_by_name("euclidean", dimension)


def max_metric(dimension: int = 1) -> MetricSpace:
    return metric_by_name("max", dimension)


def squared(dimension: int = 1) -> MetricSpace:
    return metric_by_name("squared", dimension)


def discrete(dimension: int = 1) -> MetricSpace:
    return metric_by_name("discrete", dimension)


NORM_NAMES = ("euclidean", "max", "weighted_sum")


def norm_space(name: str, dimension: int, weights=None) -> MetricSpace:
    """Metric induced by a catalogue norm p, i.e. d(u, v) = p(u - v)."""
    if name in ("euclidean", "max"):
        if weights is not None:
            raise RejectedInput(f"norm {name!r} takes no weights")
        return metric_by_name(name, dimension)
    if name != "weighted_sum":
        raise RejectedInput(
            f"unknown norm {name!r}; expected one of {', '.join(NORM_NAMES)}"
        )
    w = tuple(float(x) for x in (weights if weights is not None else [1.0] * dimension))
    if len(w) != dimension or not all(math.isfinite(x) and x > 0 for x in w):
        raise RejectedInput("weighted_sum needs one positive weight per coordinate")

    def dist(u, v):
        return sum(wk * abs(a - b) for wk, a, b in zip(w, u, v))

    return MetricSpace("weighted_sum", dimension, dist, TriangleStatus.GLOBAL,
                       kernel="weighted_sum", weights=w, exact=True)


def sup_metric(base: MetricSpace, domain_size: int) -> MetricSpace:
    """Lift ``base`` to tables over {0..n-1}: d'(g, h) = max_s d(g(s), h(s))."""
    if base.is_lifted:
        raise RejectedInput("base space is already a function space")
    if domain_size < 1:
        raise RejectedInput("domain_size must be positive")
    bd = base.distance

    def dist(g: FunctionTable, h: FunctionTable) -> float:
        return max(bd(a, b) for a, b in zip(g.values, h.values))

    return MetricSpace(
        f"sup[{base.name}]^{domain_size}", base.dimension, dist, base.triangle_status,
        domain_size=domain_size, kernel=base.kernel, weights=base.weights,
        exact=base.exact,
    )


# -- axiom checks ----------------------------------------------------------

@dataclass(frozen=True)
class WitnessSequence:
    """Evidence for N3: a sequence together with two candidate limits."""

    terms: Tuple[Element, ...]
    candidate_limits: Tuple[Element, Element]

    def __post_init__(self):
        if not self.terms:
            raise RejectedInput("witness sequence has no terms")
        if len(self.candidate_limits) != 2:
            raise RejectedInput("witness needs exactly two candidate limits")


@dataclass(frozen=True)
class Violation:
    axiom: str
    points: tuple
    values: tuple


@dataclass
class AxiomReport:
    n1_pass: bool = True
    n2_pass: bool = True
    n3_pass: bool = True
    violations: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return self.n1_pass and self.n2_pass and self.n3_pass

    def add(self, v: Violation) -> None:
        self.violations.append(v)
        setattr(self, f"{v.axiom.lower()}_pass", False)


def _separation(u: Element, v: Element) -> float:
    a = u.values if isinstance(u, FunctionTable) else (u,)
    b = v.values if isinstance(v, FunctionTable) else (v,)
    return max(abs(x - y) for p, q in zip(a, b) for x, y in zip(p, q))


def check_axioms(space: MetricSpace, sample: Sequence[Element],
                 witnesses: Sequence[WitnessSequence] = (),
                 tol: float = DEFAULT_TOL) -> AxiomReport:
    """Check N1 and N2 on every sample point/pair and N3 on the given witnesses.

    Formula-defined spaces (``space.exact``) are compared with exact equality;
    other spaces use ``tol``.
    """
    if not sample:
        raise RejectedInput("sample must be non-empty")
    if tol <= 0:
        raise RejectedInput("tol must be positive")
    slack = 0.0 if space.exact else tol
    report = AxiomReport()
    for u in sample:
        d = eval_metric(space, u, u)
        if d > slack:
            report.add(Violation("N1", (u,), (d,)))
    for i, u in enumerate(sample):
        for v in sample[i + 1:]:
            duv, dvu = eval_metric(space, u, v), eval_metric(space, v, u)
            if abs(duv - dvu) > slack:
                # larger direction first
                pts, vals = ((u, v), (duv, dvu)) if duv >= dvu else ((v, u), (dvu, duv))
                report.add(Violation("N2", pts, vals))
    for w in witnesses:
        tail = w.terms[-1]
        l1, l2 = w.candidate_limits
        d1, d2 = eval_metric(space, tail, l1), eval_metric(space, tail, l2)
        if d1 < tol and d2 < tol and _separation(l1, l2) > tol:
            report.add(Violation("N3", (tail, l1, l2), (d1, d2)))
    return report


@dataclass(frozen=True)
class TriangleWitness:
    """Ordered triple (a, b, c) with d(a, c) > d(a, b) + d(b, c)."""

    a: Element
    b: Element
    c: Element
    d_ac: float
    d_ab: float
    d_bc: float
    indices: Tuple[int, int, int] = (0, 0, 0)

    @property
    def excess(self) -> float:
        return self.d_ac - (self.d_ab + self.d_bc)


def check_triangle_on_set(space: MetricSpace, points: Sequence[Element],
                          rtol: float = TRIANGLE_RTOL
                          ) -> Tuple[bool, Optional[TriangleWitness]]:
    """Test the triangle inequality on every ordered triple of ``points``.

    Returns ``(True, None)`` or ``(False, witness)`` for the first violating
    triple in lexicographic index order.  ``rtol`` is a relative slack that
    absorbs rounding in genuinely metric spaces.
    """
    if len(points) < 3:
        raise RejectedInput("need at least 3 points for a triangle check")
    D = space.distance_matrix(points)
    hit = kernels.first_triangle_violation(D, rtol)
    if hit is None:
        return True, None
    a, b, c = hit
    return False, TriangleWitness(points[a], points[b], points[c],
                                  float(D[a, c]), float(D[a, b]), float(D[b, c]),
                                  (a, b, c))
