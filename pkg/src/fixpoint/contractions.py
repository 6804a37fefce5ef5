"""Contraction conditions and evidence-based estimates of their constants.

Ratios follow one convention throughout: ``None`` means the ratio is 0/0
(uninformative, skipped) and ``math.inf`` means a positive numerator over a
zero denominator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .metric import Element, MetricSpace, RejectedInput, eval_metric, make_point
from .rng import SplitMix64


class UnsupportedKind(ValueError):
    pass


class InvalidCoefficients(ValueError):
    pass


class ContractionKind(str, Enum):
    BANACH = "BANACH"
    KANNAN = "KANNAN"
    CHATTERJEA = "CHATTERJEA"
    CIRIC = "CIRIC"

    @property
    def ceiling(self) -> float:
        """Strict upper limit on admissible constants."""
        return 0.5 if self in (ContractionKind.KANNAN, ContractionKind.CHATTERJEA) else 1.0

    def admits(self, lam: float) -> bool:
        return 0.0 <= lam < self.ceiling


@dataclass(frozen=True)
class MapUnderTest:
    """A deterministic self-map.

    ``vectorized`` optionally maps a (count, dimension) array of points in one
    call; it must agree with ``apply`` row by row.
    """

    name: str
    dimension: int
    apply: Callable[[Element], Element]
    vectorized: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, u: Element) -> Element:
        return self.apply(u)


@dataclass(frozen=True)
class CiricCoefficients:
    """Five non-negative weights, either constant or evaluated per pair."""

    values: Optional[Tuple[float, float, float, float, float]] = None
    rule: Optional[Callable[[Element, Element], Sequence[float]]] = None

    def __post_init__(self):
        if (self.values is None) == (self.rule is None):
            raise InvalidCoefficients("give either constant values or a rule")
        if self.values is not None:
            object.__setattr__(self, "values", self._validate(self.values))

    @staticmethod
    def _validate(lams) -> Tuple[float, ...]:
        lams = tuple(float(x) for x in lams)
        if len(lams) != 5:
            raise InvalidCoefficients("exactly five coefficients are required")
        if not all(math.isfinite(x) and x >= 0.0 for x in lams):
            raise InvalidCoefficients(f"coefficients must be finite and >= 0: {lams}")
        return lams

    def at(self, u: Element, v: Element) -> Tuple[float, ...]:
        if self.values is not None:
            return self.values
        return self._validate(self.rule(u, v))


@dataclass(frozen=True)
class ContractionReport:
    kind: ContractionKind
    lambda_estimate: float
    admissible: bool
    worst_pair: Optional[Tuple[Element, Element]]
    pairs_checked: int
    informative: bool = True


def _terms(space: MetricSpace, R: MapUnderTest, kind: ContractionKind, u, v):
    ru, rv = R(u), R(v)
    num = eval_metric(space, ru, rv)
    if kind is ContractionKind.BANACH:
        den = eval_metric(space, u, v)
    elif kind is ContractionKind.KANNAN:
        den = eval_metric(space, ru, u) + eval_metric(space, rv, v)
    elif kind is ContractionKind.CHATTERJEA:
        den = eval_metric(space, ru, v) + eval_metric(space, rv, u)
    else:
        raise UnsupportedKind("CIRIC has no single ratio; use verify_condition")
    return num, den


def condition_ratio(space: MetricSpace, R: MapUnderTest, kind: ContractionKind,
                    u: Element, v: Element) -> Optional[float]:
    kind = ContractionKind(kind)
    num, den = _terms(space, R, kind, u, v)
    if den == 0.0:
        return None if num == 0.0 else math.inf
    return num / den


def estimate_lambda(space: MetricSpace, R: MapUnderTest, kind: ContractionKind,
                    pairs: Sequence[Tuple[Element, Element]]) -> ContractionReport:
    """Largest condition ratio over ``pairs``: the least constant they admit."""
    kind = ContractionKind(kind)
    if kind is ContractionKind.CIRIC:
        raise UnsupportedKind("CIRIC constants are not estimated; use verify_condition")
    if not pairs:
        raise RejectedInput("pairs must be non-empty")
    best, worst = None, None
    for u, v in pairs:
        r = condition_ratio(space, R, kind, u, v)
        if r is not None and (best is None or r > best):
            best, worst = r, (u, v)
    if best is None:
        return ContractionReport(kind, 0.0, True, None, len(pairs), informative=False)
    return ContractionReport(kind, best, best < kind.ceiling, worst, len(pairs))


def verify_condition(space: MetricSpace, R: MapUnderTest, kind: ContractionKind,
                     lam: float, pairs: Sequence[Tuple[Element, Element]],
                     coeffs: Optional[CiricCoefficients] = None, tol: float = 0.0,
                     ) -> Tuple[bool, Optional[Tuple[Element, Element]]]:
    """Check the kind's inequality with constant ``lam`` on every pair.

    ``tol`` is added to the right-hand side.  Returns the first violating pair.
    """
    kind = ContractionKind(kind)
    if not kind.admits(lam):
        raise RejectedInput(f"lambda={lam} outside [0, {kind.ceiling}) for {kind.value}")
    if kind is ContractionKind.CIRIC:
        if coeffs is None:
            raise InvalidCoefficients("CIRIC verification needs coefficients")
        for u, v in pairs:
            c = coeffs.at(u, v)
            if sum(c) > lam:
                raise InvalidCoefficients(
                    f"coefficient sum {sum(c)} exceeds lambda={lam} at pair {(u, v)}"
                )
            ru, rv = R(u), R(v)
            rhs = (c[0] * eval_metric(space, u, v)
                   + c[1] * eval_metric(space, ru, u)
                   + c[2] * eval_metric(space, rv, v)
                   + c[3] * eval_metric(space, ru, v)
                   + c[4] * eval_metric(space, rv, u))
            if eval_metric(space, ru, rv) > rhs + tol:
                return False, (u, v)
        return True, None
    for u, v in pairs:
        num, den = _terms(space, R, kind, u, v)
        if num > lam * den + tol:
            return False, (u, v)
    return True, None


def ciric_reduced_factor(lams: Sequence[float]) -> float:
    """Per-step factor of the symmetrized five-term condition.

    (l1 + (l2+l3)/2 + (l4+l5)/2) / (1 - (l2+l3)/2 - (l4+l5)/2)
    """
    l1, l2, l3, l4, l5 = CiricCoefficients._validate(lams)
    half = (l2 + l3) / 2 + (l4 + l5) / 2
    den = 1.0 - half
    if den <= 0.0:
        raise InvalidCoefficients(f"non-positive denominator {den}")
    return (l1 + half) / den


# -- pair generators -------------------------------------------------------

def grid_points(box: Sequence[Tuple[float, float]], per_axis: int) -> list:
    if per_axis < 2:
        raise RejectedInput("per_axis must be at least 2")
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in box]
    return [make_point(p) for p in itertools.product(*(a.tolist() for a in axes))]


def grid_pairs(box: Sequence[Tuple[float, float]], per_axis: int) -> list:
    """All unordered pairs of distinct points of an axis-aligned grid."""
    pts = grid_points(box, per_axis)
    return list(itertools.combinations(pts, 2))


def random_points(box: Sequence[Tuple[float, float]], count: int, rng: SplitMix64) -> list:
    return [tuple(rng.uniform(lo, hi) for lo, hi in box) for _ in range(count)]


def random_pairs(box: Sequence[Tuple[float, float]], count: int, seed: int = 0) -> list:
    rng = SplitMix64(seed)
    return [(tuple(rng.uniform(lo, hi) for lo, hi in box),
             tuple(rng.uniform(lo, hi) for lo, hi in box)) for _ in range(count)]
