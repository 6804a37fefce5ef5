"""Picard iteration, orbit diagnostics and a-priori distance bounds.

For a start point u0 with displacement delta = d(u0, R(u0)) and contraction
constant lam, the distance from u0 to the fixed point is bounded by

============  ===========================  =========================
kind          bound                        needs
============  ===========================  =========================
BANACH        delta / (1 - lam)            lam < 1, orbit triangle
KANNAN        (1+lam) delta / (1 - 2 lam)  lam < 1/2, orbit triangle
CHATTERJEA    (1+lam) delta / (1 - 2 lam)  lam < 1/2, orbit triangle
CIRIC         (2+lam) delta / (2 (1-lam))  lam < 1, orbit triangle
============  ===========================  =========================

where "orbit triangle" means the triangle inequality restricted to the orbit
{u0, R(u0), R^2(u0), ...}.  Orbital continuity of R is assumed, not checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .contractions import ContractionKind, MapUnderTest
from .metric import (Element, FunctionTable, MetricSpace, RejectedInput, TriangleWitness,
                     check_triangle_on_set, eval_metric)

ORBIT_TRIANGLE_ITERATES = 50


class DivergenceError(ArithmeticError):
    pass


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class IterationConfig:
    max_iters: int = 10_000
    tol: float = 1e-10
    window: int = 8

    def __post_init__(self):
        if self.max_iters < 1:
            raise RejectedInput("max_iters must be positive")
        if not self.tol > 0:
            raise RejectedInput("tol must be positive")
        if self.window < 1:
            raise RejectedInput("window must be at least 1")


@dataclass
class Orbit:
    start: Element
    iterates: List[Element]
    step_distances: List[float]
    start_distances: List[float]


@dataclass
class FixedPointCertificate:
    fixed_point: Element
    iterations_used: int
    residual: float
    theorem: str
    delta: float
    lam: float
    theoretical_bound: float
    observed_start_distance: float
    bound_satisfied: bool
    orbit_triangle_ok: Optional[bool]
    converged: bool
    tol: float
    orbit_witness: Optional[TriangleWitness] = None
    orbit_iterates_checked: int = 0
    assumptions: Tuple[str, ...] = ()
    orbit: List[Element] = field(default_factory=list, repr=False)


def _finite(x: Element) -> bool:
    vals = x.values if isinstance(x, FunctionTable) else (x,)
    return all(math.isfinite(c) for p in vals for c in p)


def _step(R: MapUnderTest, x: Element, k: int) -> Element:
    try:
        y = R(x)
    except OverflowError as exc:
        raise DivergenceError(f"overflow at step {k}") from exc
    except ValueError as exc:
        # FunctionTable/make_point reject non-finite coordinates
        raise DivergenceError(f"non-finite iterate at step {k}: {exc}") from exc
    if not _finite(y):
        raise DivergenceError(f"non-finite iterate at step {k}")
    return y


def compute_orbit(space: MetricSpace, R: MapUnderTest, u0: Element, m: int) -> Orbit:
    """Iterates u0, R(u0), ..., R^m(u0) with cached step and start distances."""
    if m < 1:
        raise RejectedInput("m must be at least 1")
    space.check_element(u0)
    its = [u0]
    for k in range(1, m + 1):
        its.append(_step(R, its[-1], k))
    steps = [eval_metric(space, its[k], its[k + 1]) for k in range(m)]
    starts = [eval_metric(space, u0, x) for x in its]
    return Orbit(u0, its, steps, starts)


def _tail_is_cauchy(space: MetricSpace, its: Sequence[Element], window: int, tol: float) -> bool:
    anchor = its[-window - 1]
    return max(eval_metric(space, anchor, x) for x in its[-window:]) < tol


def detect_cauchy(space: MetricSpace, orbit: Orbit, cfg: IterationConfig) -> bool:
    """True when d(x_m, x_{m+j}) < tol for j = 1..window, x_m the window anchor."""
    if len(orbit.iterates) < cfg.window + 1:
        raise RejectedInput("orbit shorter than window + 1")
    return _tail_is_cauchy(space, orbit.iterates, cfg.window, cfg.tol)


def check_orbit_triangle(space: MetricSpace, orbit) -> Tuple[bool, Optional[TriangleWitness]]:
    its = orbit.iterates if isinstance(orbit, Orbit) else list(orbit)
    return check_triangle_on_set(space, its)


# -- bounds ----------------------------------------------------------------

def _check(delta: float, lam: float, ceiling: float) -> None:
    if not (0.0 <= lam < ceiling):
        raise DomainError(f"lambda={lam} outside [0, {ceiling})")
    if not delta >= 0.0:
        raise DomainError(f"delta={delta} must be non-negative")


def bound_banach(delta: float, lam: float) -> float:
    _check(delta, lam, 1.0)
    return delta / (1.0 - lam)


def bound_kannan_chatterjea(delta: float, lam: float) -> float:
    _check(delta, lam, 0.5)
    return (1.0 + lam) * delta / (1.0 - 2.0 * lam)


def bound_ciric(delta: float, lam: float) -> float:
    _check(delta, lam, 1.0)
    return (2.0 + lam) * delta / (2.0 * (1.0 - lam))


def kannan_step_bound(m: int, lam: float, d1: float) -> float:
    """Ceiling (lam/(1-lam))^(m-1) * d1 on the m-th step distance."""
    if m < 1:
        raise RejectedInput("m must be positive")
    _check(d1, lam, 0.5)
    return (lam / (1.0 - lam)) ** (m - 1) * d1


def theoretical_bound(kind: ContractionKind, delta: float, lam: float) -> float:
    kind = ContractionKind(kind)
    if kind is ContractionKind.BANACH:
        return bound_banach(delta, lam)
    if kind is ContractionKind.CIRIC:
        return bound_ciric(delta, lam)
    return bound_kannan_chatterjea(delta, lam)


# -- solving ---------------------------------------------------------------

def solve_fixed_point(space: MetricSpace, R: MapUnderTest, u0: Element,
                      cfg: IterationConfig = IterationConfig(),
                      theorem: ContractionKind = ContractionKind.BANACH,
                      lam: float = 0.5) -> FixedPointCertificate:
    """Iterate from u0 until the tail is Cauchy and the residual is below tol.

    Exhausting ``cfg.max_iters`` gives ``converged=False`` rather than an error.
    """
    theorem = ContractionKind(theorem)
    if not theorem.admits(lam):
        raise DomainError(f"lambda={lam} outside [0, {theorem.ceiling}) for {theorem.value}")
    space.check_element(u0)
    its = [u0]
    converged = False
    residual = math.inf
    x = u0
    for k in range(1, cfg.max_iters + 1):
        x = _step(R, x, k)
        its.append(x)
        if len(its) > cfg.window and _tail_is_cauchy(space, its, cfg.window, cfg.tol):
            residual = eval_metric(space, x, _step(R, x, k + 1))
            if residual <= cfg.tol:
                converged = True
                break
    if not converged:
        residual = eval_metric(space, x, _step(R, x, len(its)))

    delta = eval_metric(space, u0, its[1])
    bound = theoretical_bound(theorem, delta, lam)
    observed = eval_metric(space, u0, x)
    iterations = len(its) - 1
    head = its[: min(iterations, ORBIT_TRIANGLE_ITERATES) + 1]
    if len(head) >= 3:
        tri_ok, witness = check_triangle_on_set(space, head)
    else:
        tri_ok, witness = None, None
    assumptions = () if theorem is ContractionKind.BANACH else ("orbital continuity",)
    return FixedPointCertificate(
        fixed_point=x, iterations_used=iterations, residual=residual,
        theorem=theorem.value, delta=delta, lam=lam, theoretical_bound=bound,
        observed_start_distance=observed, bound_satisfied=observed <= bound + cfg.tol,
        orbit_triangle_ok=tri_ok, converged=converged, tol=cfg.tol,
        orbit_witness=witness, orbit_iterates_checked=len(head) if tri_ok is not None else 0,
        assumptions=assumptions, orbit=its,
    )


class UniquenessResult(NamedTuple):
    unique: bool
    fixed_points: list
    all_converged: bool


def verify_uniqueness(space: MetricSpace, R: MapUnderTest, starts: Sequence[Element],
                      cfg: IterationConfig = IterationConfig(),
                      theorem: ContractionKind = ContractionKind.BANACH,
                      lam: float = 0.5) -> UniquenessResult:
    """Solve from every start and test that all limits coincide within tol."""
    if not starts:
        raise RejectedInput("starts must be non-empty")
    certs = [solve_fixed_point(space, R, s, cfg, theorem, lam) for s in starts]
    pts = [c.fixed_point for c in certs]
    ok = all(c.converged for c in certs)
    same = all(eval_metric(space, p, q) <= cfg.tol
               for i, p in enumerate(pts) for q in pts[i + 1:])
    return UniquenessResult(ok and same, pts, ok)


def brute_force_fixed_point(space: MetricSpace, R: MapUnderTest,
                            grid: Sequence[Element]) -> Tuple[Element, float]:
    """Grid point minimizing d(x, R(x)); ties go to the earliest point."""
    if not grid:
        raise RejectedInput("grid must be non-empty")
    if R.vectorized is not None and not space.is_lifted:
        X = np.asarray(grid, dtype=np.float64)
        images = [tuple(r) for r in np.asarray(R.vectorized(X), dtype=np.float64)]
    else:
        images = [R(x) for x in grid]
    res = space.distances_to(list(grid), images)
    i = int(np.argmin(res))
    return grid[i], float(res[i])
