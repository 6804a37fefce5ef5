"""Single-variable functional equations g(s) = G(s, g(psi(s))) on a finite domain.

The equation is solved as a fixed point of the operator

    O(h)(s) = G(s, h(psi(s)))

acting on function tables, with the sup-metric d'(g, h) = max_s d(g(s), h(s)).
A table g with d'(g, O(g)) <= delta is a delta-approximate solution; the
certificates below record how far g actually sits from the exact solution
next to the bound the relevant theorem guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .contractions import CiricCoefficients, ContractionKind, MapUnderTest, verify_condition
from .metric import (FunctionTable, MetricSpace, Point, RejectedInput, TriangleWitness,
                     eval_metric, sup_metric)
from .picard import DomainError, IterationConfig, solve_fixed_point, theoretical_bound
from .rng import SplitMix64


class InternalConsistencyError(RuntimeError):
    """Two independent solution routes disagree."""


class TruncationError(ArithmeticError):
    pass


class StabilityTheorem(str, Enum):
    BANACH_SUP = "T4.2-BANACH-SUP"
    BANACH_ORBIT = "C4.3-BANACH-ORBIT"
    KANNAN = "T4.4-KANNAN"
    CHATTERJEA = "T4.5-CHATTERJEA"
    CIRIC = "T4.6-CIRIC"
    BAKER = "T5-BAKER"

    @property
    def kind(self) -> ContractionKind:
        return {
            "T4.4-KANNAN": ContractionKind.KANNAN,
            "T4.5-CHATTERJEA": ContractionKind.CHATTERJEA,
            "T4.6-CIRIC": ContractionKind.CIRIC,
        }.get(self.value, ContractionKind.BANACH)


@dataclass(frozen=True)
class FuncEqInstance:
    domain_size: int
    psi: Tuple[int, ...]
    G: Callable[[int, Point], Point]
    base_space: MetricSpace
    description: str = ""

    def __post_init__(self):
        n = self.domain_size
        if n < 1:
            raise RejectedInput("domain_size must be positive")
        psi = tuple(int(i) for i in self.psi)
        if len(psi) != n or any(not 0 <= i < n for i in psi):
            raise RejectedInput(f"psi must list {n} indices in [0, {n})")
        if self.base_space.is_lifted:
            raise RejectedInput("base space must be a point space")
        object.__setattr__(self, "psi", psi)

    @property
    def space(self) -> MetricSpace:
        """The lifted sup-metric space of tables."""
        return sup_metric(self.base_space, self.domain_size)

    def check_table(self, h: FunctionTable) -> None:
        self.space.check_element(h)


@dataclass(frozen=True)
class LiftedOperator:
    instance: FuncEqInstance

    def __call__(self, h: FunctionTable) -> FunctionTable:
        return apply_operator(self, h)

    def as_map(self) -> MapUnderTest:
        inst = self.instance
        return MapUnderTest(f"O[{inst.description or 'G'}]", inst.base_space.dimension, self)


def apply_operator(op: LiftedOperator, h: FunctionTable) -> FunctionTable:
    inst = op.instance
    inst.check_table(h)
    vals = h.values
    out = []
    for s, j in enumerate(inst.psi):
        y = tuple(inst.G(s, vals[j]))
        if len(y) != inst.base_space.dimension:
            raise RejectedInput(f"G changed the dimension at s={s}")
        out.append(y)
    return FunctionTable(tuple(out))


def operator_power(op: LiftedOperator, h: FunctionTable, k: int) -> FunctionTable:
    if k < 0:
        raise RejectedInput("k must be non-negative")
    op.instance.check_table(h)
    for _ in range(k):
        h = apply_operator(op, h)
    return h


def compute_delta(instance: FuncEqInstance, g: FunctionTable) -> float:
    """Least delta with max_s d(g(s), G(s, g(psi(s)))) <= delta."""
    og = apply_operator(LiftedOperator(instance), g)
    return eval_metric(instance.space, g, og)


def check_sup_contraction(instance: FuncEqInstance, kind: ContractionKind,
                          tables: Sequence[Tuple[FunctionTable, FunctionTable]],
                          lam: float, coeffs: Optional[CiricCoefficients] = None,
                          tol: float = 0.0):
    """Verify the lifted contraction inequality for O in the sup-metric space."""
    if not tables:
        raise RejectedInput("tables must be non-empty")
    for g1, g2 in tables:
        instance.check_table(g1)
        instance.check_table(g2)
    return verify_condition(instance.space, LiftedOperator(instance).as_map(),
                            kind, lam, tables, coeffs=coeffs, tol=tol)


@dataclass
class StabilityCertificate:
    theorem: str
    delta: float
    lam: float
    exact_solution: FunctionTable
    sup_distance: float
    theoretical_bound: Optional[float]
    bound_satisfied: Optional[bool]
    residual: float
    orbit_triangle_ok: Optional[bool]
    converged: bool
    iterations_used: int
    tol: float
    reason: str = ""
    orbit_iterates_checked: int = 0
    orbit_witness: Optional[TriangleWitness] = None
    oracle_distance: Optional[float] = None
    assumptions: Tuple[str, ...] = ()


def solve_stability(instance: FuncEqInstance, g: FunctionTable, theorem,
                    lam: float, cfg: IterationConfig = IterationConfig(),
                    delta: Optional[float] = None) -> StabilityCertificate:
    """Solve the equation by iterating O from g and certify g's distance to it.

    The bound is reported as ``None`` (not applicable) under T4.2, which
    states no distance bound, and whenever the orbit triangle inequality
    fails on the checked iterates.
    """
    theorem = StabilityTheorem(theorem)
    kind = theorem.kind
    if not kind.admits(lam):
        raise DomainError(f"lambda={lam} outside [0, {kind.ceiling}) for {theorem.value}")
    instance.check_table(g)
    computed = compute_delta(instance, g)
    if delta is not None and delta < computed:
        raise RejectedInput(f"supplied delta={delta} is below the computed {computed}")

    space = instance.space
    fp = solve_fixed_point(space, LiftedOperator(instance).as_map(), g, cfg, kind, lam)
    h = fp.fixed_point
    bound: Optional[float] = None
    satisfied: Optional[bool] = None
    reason = ""
    if theorem is StabilityTheorem.BANACH_SUP:
        reason = "T4.2 states no distance bound; use C4.3-BANACH-ORBIT"
    elif fp.orbit_triangle_ok is False:
        w = fp.orbit_witness
        reason = (f"orbit triangle inequality fails at iterates {w.indices}: "
                  f"{w.d_ac!r} > {w.d_ab!r} + {w.d_bc!r}")
    else:
        bound = theoretical_bound(kind, computed, lam)
        satisfied = fp.observed_start_distance <= bound + cfg.tol
    if not fp.converged:
        reason = (reason + "; " if reason else "") + f"not converged in {cfg.max_iters} iterations"
    return StabilityCertificate(
        theorem=theorem.value, delta=computed, lam=lam, exact_solution=h,
        sup_distance=fp.observed_start_distance, theoretical_bound=bound,
        bound_satisfied=satisfied, residual=fp.residual,
        orbit_triangle_ok=fp.orbit_triangle_ok, converged=fp.converged,
        iterations_used=fp.iterations_used, tol=cfg.tol, reason=reason,
        orbit_iterates_checked=fp.orbit_iterates_checked, orbit_witness=fp.orbit_witness,
        assumptions=fp.assumptions,
    )


# -- linear equation f(s) = lam(s) f(psi(s)) + B(s) ------------------------

@dataclass(frozen=True)
class BakerInstance:
    """Linear equation with non-negative multipliers and a norm-induced metric."""

    domain_size: int
    psi: Tuple[int, ...]
    lambda_fn: Tuple[float, ...]
    B: FunctionTable
    norm: MetricSpace

    def __post_init__(self):
        n = self.domain_size
        psi = tuple(int(i) for i in self.psi)
        if n < 1 or len(psi) != n or any(not 0 <= i < n for i in psi):
            raise RejectedInput(f"psi must list {n} indices in [0, {n})")
        lams = tuple(float(x) for x in self.lambda_fn)
        if len(lams) != n:
            raise RejectedInput(f"lambda_fn needs {n} entries")
        if not all(math.isfinite(x) and x >= 0.0 for x in lams):
            raise RejectedInput("lambda_fn entries must be finite and non-negative")
        if max(lams) >= 1.0:
            raise DomainError(f"max lambda_fn = {max(lams)} must be below 1")
        if self.B.domain_size != n or self.B.dimension != self.norm.dimension:
            raise RejectedInput("B does not match domain_size/dimension")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "lambda_fn", lams)

    @property
    def lambda_max(self) -> float:
        return max(self.lambda_fn)

    def norm_of(self, v: Point) -> float:
        return self.norm.distance(v, (0.0,) * len(v))

    def to_funceq(self) -> FuncEqInstance:
        lams, B = self.lambda_fn, self.B.values

        def G(s: int, x: Point) -> Point:
            return tuple(lams[s] * xi + bi for xi, bi in zip(x, B[s]))

        return FuncEqInstance(self.domain_size, self.psi, G, self.norm,
                              description="linear")


def baker_series_solution(inst: BakerInstance, k_max: int = 64, tail_tol: float = 1e-13,
                          hard_cap: int = 1_000_000) -> FunctionTable:
    """Unrolled solution sum_k (prod_{i<k} lam(psi^i s)) B(psi^k s).

    The truncation length doubles from ``k_max`` until the tail estimate
    lam_max^K * max|B| / (1 - lam_max) is at most ``tail_tol``.
    """
    if k_max < 1:
        raise RejectedInput("k_max must be at least 1")
    lmax = inst.lambda_max
    bmax = max(inst.norm_of(b) for b in inst.B.values)
    K = k_max
    while lmax ** K * bmax / (1.0 - lmax) > tail_tol:
        K *= 2
        if K > hard_cap:
            raise TruncationError(f"tail bound above {tail_tol} at {hard_cap} terms")
    lam = np.asarray(inst.lambda_fn)
    psi = np.asarray(inst.psi)
    B = inst.B.to_array()
    idx = np.arange(inst.domain_size)
    coef = np.ones(inst.domain_size)
    acc = np.zeros_like(B)
    for _ in range(K):
        acc += coef[:, None] * B[idx]
        coef = coef * lam[idx]
        if not coef.any():
            break
        idx = psi[idx]
    return FunctionTable.of(acc.tolist())


def solve_baker(inst: BakerInstance, f0: FunctionTable,
                cfg: IterationConfig = IterationConfig(),
                oracle_tail_tol: float = 1e-13) -> StabilityCertificate:
    """Solve the linear equation by iteration and cross-check the series oracle.

    The oracle must agree within tol / (1 - lam_max) + ``oracle_tail_tol``,
    the a-posteriori error of a converged iterate in a normed space.
    """
    funceq = inst.to_funceq()
    cert = solve_stability(funceq, f0, StabilityTheorem.BANACH_ORBIT, inst.lambda_max, cfg)
    cert.theorem = StabilityTheorem.BAKER.value
    series = baker_series_solution(inst, tail_tol=oracle_tail_tol)
    gap = eval_metric(funceq.space, cert.exact_solution, series)
    cert.oracle_distance = gap
    allowed = cfg.tol / (1.0 - inst.lambda_max) + oracle_tail_tol
    if cert.converged and gap > allowed:
        raise InternalConsistencyError(
            f"iteration and series solutions differ by {gap} > {allowed}"
        )
    return cert


def perturb_solution(exact: FunctionTable, magnitude: float, seed: int = 0) -> FunctionTable:
    """Shift every coordinate by a seeded uniform draw from [-magnitude, magnitude]."""
    if not magnitude >= 0.0:
        raise RejectedInput("magnitude must be non-negative")
    if magnitude == 0.0:
        return exact
    rng = SplitMix64(seed)
    return FunctionTable.of(
        tuple(x + rng.uniform(-magnitude, magnitude) for x in p) for p in exact.values
    )
