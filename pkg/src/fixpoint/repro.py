"""Reproduction suite: every quantitative bound checked on seeded instances.

Each ``criterion_*`` function returns a JSON-ready dict with ``passed`` and
a one-line ``summary``; :func:`run_all` runs them in order and finishes with
an in-process determinism check.  Results contain no timings, so the output
is a pure function of the seed.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .catalogue import affine_G, affine_map, standard_contractions
from .contractions import (ContractionKind, ciric_reduced_factor, estimate_lambda,
                           grid_pairs, random_pairs, random_points)
from .funceq import (BakerInstance, FuncEqInstance, LiftedOperator, StabilityTheorem,
                     baker_series_solution, check_sup_contraction, perturb_solution,
                     solve_baker, solve_stability)
from .metric import (FunctionTable, NORM_NAMES, euclidean, eval_metric, norm_space,
                     squared)
from .picard import (IterationConfig, bound_banach, bound_ciric, bound_kannan_chatterjea,
                     brute_force_fixed_point, check_orbit_triangle, compute_orbit,
                     kannan_step_bound, solve_fixed_point)
from .rng import SplitMix64

TIGHT = IterationConfig(max_iters=10_000, tol=1e-12, window=8)


def _row(cid: int, name: str, passed: bool, tolerance: float, summary: str,
         worst: tuple = (None, None), **details) -> dict:
    """``worst`` is the (bound, observed) pair with the smallest margin."""
    bound, observed = worst
    margin = None if bound is None else bound - observed
    return {"id": cid, "name": name, "passed": bool(passed), "tolerance": tolerance,
            "summary": summary, "bound": bound, "observed": observed, "margin": margin,
            "details": details}


def criterion_1(seed: int = 0) -> dict:
    """Scalar G(s, x) = lam*x + 1 from g = 0 attains delta/(1-lam) exactly."""
    tol = 1e-10
    cases = []
    for lam in (0.1, 0.5, 0.9):
        inst = FuncEqInstance(1, (0,), affine_G([lam], [1.0]), euclidean(), "lam*x+1")
        cert = solve_stability(inst, FunctionTable.of([(0.0,)]),
                               StabilityTheorem.BANACH_ORBIT, lam, TIGHT)
        expected = bound_banach(cert.delta, lam)
        gap = abs(cert.sup_distance - expected)
        ok = (cert.converged and cert.delta == 1.0 and cert.bound_satisfied is True
              and cert.theoretical_bound == expected and gap <= tol)
        cases.append({"lambda": lam, "delta": cert.delta, "bound": expected,
                      "observed": cert.sup_distance, "margin": expected - cert.sup_distance,
                      "gap": gap, "passed": ok})
    w = max(cases, key=lambda c: c["gap"])
    return _row(1, "Banach bound tightness", all(c["passed"] for c in cases), tol,
                f"max |observed - delta/(1-lam)| = {w['gap']:.3e} over lam in (0.1, 0.5, 0.9)",
                (w["bound"], w["observed"]), cases=cases)


def random_baker(rng: SplitMix64) -> tuple:
    n = rng.randint(1, 8)
    d = rng.randint(1, 3)
    psi = tuple(rng.randint(0, n - 1) for _ in range(n))
    lmax = rng.uniform(0.0, 0.9)
    lams = tuple(rng.uniform(0.0, lmax) for _ in range(n))
    B = FunctionTable.of(tuple(rng.uniform(-10.0, 10.0) for _ in range(d)) for _ in range(n))
    name = rng.choice(NORM_NAMES)
    weights = [rng.uniform(0.5, 2.0) for _ in range(d)] if name == "weighted_sum" else None
    inst = BakerInstance(n, psi, lams, B, norm_space(name, d, weights))
    magnitude = rng.uniform(0.0, 1.0)
    return inst, magnitude, rng.next_u64()


def criterion_2(seed: int = 0, count: int = 200) -> dict:
    """Iteration and series oracle agree; the linear-equation bound holds."""
    tol = 1e-10
    rng = SplitMix64(seed + 2)
    worst_gap, violations, failures, min_margin = 0.0, 0, 0, math.inf
    tightest = (None, None)
    for _ in range(count):
        inst, magnitude, pseed = random_baker(rng)
        series = baker_series_solution(inst)
        f0 = perturb_solution(series, magnitude, pseed)
        cert = solve_baker(inst, f0, TIGHT)
        gap = eval_metric(inst.to_funceq().space, cert.exact_solution, series)
        worst_gap = max(worst_gap, gap)
        if not cert.converged or gap > tol:
            failures += 1
        bound = bound_banach(cert.delta, inst.lambda_max)
        if bound - cert.sup_distance < min_margin:
            min_margin = bound - cert.sup_distance
            tightest = (bound, cert.sup_distance)
        if cert.bound_satisfied is not True or cert.sup_distance > bound + TIGHT.tol:
            violations += 1
    ok = failures == 0 and violations == 0
    return _row(2, "Baker oracle equivalence", ok, tol,
                f"{count} instances: max oracle gap {worst_gap:.3e}, "
                f"{violations} bound violations, min margin {min_margin:.3e}",
                tightest, instances=count, max_gap=worst_gap, bound_violations=violations,
                oracle_failures=failures, min_margin=min_margin)


def criterion_3(seed: int = 0) -> dict:
    """x/4 is a Kannan map with constant 1/3; its steps obey the Kannan decay."""
    tol = 1e-12
    space, R = euclidean(), affine_map(0.25)
    box = ((-2.0, 2.0),)
    pairs = grid_pairs(box, 41) + random_pairs(box, 200, seed + 3)
    rep = estimate_lambda(space, R, ContractionKind.KANNAN, pairs)
    lam = rep.lambda_estimate
    est_ok = rep.admissible and abs(lam - 1.0 / 3.0) <= tol
    rng = SplitMix64(seed + 3)
    starts = [(1.0,), (-2.0,)] + [(rng.uniform(-2.0, 2.0),) for _ in range(3)]
    worst, checks, tightest = -math.inf, 0, (None, None)
    for u0 in starts:
        orbit = compute_orbit(space, R, u0, 50)
        d1 = orbit.step_distances[0]
        for m in range(1, 51):
            bound = kannan_step_bound(m, lam, d1)
            excess = orbit.step_distances[m - 1] - bound
            if excess > worst:
                worst, tightest = excess, (bound, orbit.step_distances[m - 1])
            checks += 1
    ok = est_ok and worst <= tol
    return _row(3, "Kannan decay", ok, tol,
                f"lambda_K estimate {lam!r} on {len(pairs)} pairs; "
                f"max step excess over bound {worst:.3e} ({checks} checks)",
                tightest, lambda_estimate=lam, pairs=len(pairs), max_excess=worst, checks=checks)


def random_affine_funceq(rng: SplitMix64) -> tuple:
    n = rng.randint(1, 6)
    d = rng.randint(1, 2)
    psi = tuple(rng.randint(0, n - 1) for _ in range(n))
    amax = rng.uniform(0.05, 0.32)
    a = [rng.uniform(-amax, amax) for _ in range(n)]
    c = [tuple(rng.uniform(-5.0, 5.0) for _ in range(d)) for _ in range(n)]
    inst = FuncEqInstance(n, psi, affine_G(a, c, d), euclidean(d), "affine")
    m = max(abs(x) for x in a)
    lam = m / (1.0 - m)
    box = ((-5.0, 5.0),) * d
    g = FunctionTable.of(random_points(box, n, rng))
    pairs = [(FunctionTable.of(random_points(box, n, rng)),
              FunctionTable.of(random_points(box, n, rng))) for _ in range(24)]
    op = LiftedOperator(inst)
    pairs += [(g, op(g)), (g, op(op(g)))]
    return inst, lam, g, pairs


def criterion_4(seed: int = 0, count: int = 100) -> dict:
    """Kannan and Chatterjea stability bounds on affine equations."""
    tol = 1e-9
    rng = SplitMix64(seed + 4)
    violations, hyp_fail, certs, min_margin = 0, 0, 0, math.inf
    tightest = (None, None)
    for _ in range(count):
        inst, lam, g, pairs = random_affine_funceq(rng)
        for theorem in (StabilityTheorem.CHATTERJEA, StabilityTheorem.KANNAN):
            holds, _ = check_sup_contraction(inst, theorem.kind, pairs, lam, tol=1e-12)
            cert = solve_stability(inst, g, theorem, lam, TIGHT)
            certs += 1
            if not holds or cert.orbit_triangle_ok is not True or not cert.converged:
                hyp_fail += 1
                continue
            bound = bound_kannan_chatterjea(cert.delta, lam)
            if bound - cert.sup_distance < min_margin:
                min_margin = bound - cert.sup_distance
                tightest = (bound, cert.sup_distance)
            if cert.sup_distance > bound + tol or cert.bound_satisfied is not True:
                violations += 1
    ok = violations == 0 and hyp_fail == 0
    return _row(4, "Chatterjea/Kannan bound", ok, tol,
                f"{certs} certificates on {count} instances: {violations} violations, "
                f"{hyp_fail} hypothesis failures, min margin {min_margin:.3e}",
                tightest, certificates=certs, violations=violations, hypothesis_failures=hyp_fail,
                min_margin=min_margin)


def criterion_5(seed: int = 0, count: int = 1000) -> dict:
    """Reduced Ciric factor below the coefficient sum; Ciric bound above Banach."""
    rng = SplitMix64(seed + 5)
    bad_factor, bad_bound, worst_gap = 0, 0, math.inf
    tightest = (None, None)
    for _ in range(count):
        lam = rng.uniform(0.0, 1.0)
        raw = [rng.random() + 1e-3 for _ in range(5)]
        scale = lam * rng.uniform(0.01, 0.999) / sum(raw)
        coeffs = [x * scale for x in raw]
        total = sum(coeffs)
        f = ciric_reduced_factor(coeffs)
        if total - f < worst_gap:
            worst_gap, tightest = total - f, (total, f)
        if not (f < total <= lam):
            bad_factor += 1
        delta = rng.uniform(0.0, 10.0)
        if bound_ciric(delta, lam) < bound_banach(delta, lam):
            bad_bound += 1
    ok = bad_factor == 0 and bad_bound == 0
    return _row(5, "Ciric reduction", ok, 0.0,
                f"{count} tuples: {bad_factor} factor failures, {bad_bound} bound-order "
                f"failures, min (sum - factor) {worst_gap:.3e}",
                tightest, tuples=count, factor_failures=bad_factor, bound_failures=bad_bound,
                min_gap=worst_gap)


def criterion_6(seed: int = 0) -> dict:
    """The halving orbit breaks the triangle inequality for the squared metric."""
    tol = 1e-15
    orbit = compute_orbit(squared(), affine_map(0.5), (1.0,), 5)
    ok_flag, w = check_orbit_triangle(squared(), orbit)
    ok = (ok_flag is False and w is not None
          and (w.a, w.b, w.c) == ((1.0,), (0.5,), (0.25,))
          and abs(w.d_ac - 9 / 16) <= tol and abs(w.d_ab + w.d_bc - 5 / 16) <= tol)
    summary = (f"witness {w.a + w.b + w.c}: {w.d_ac!r} > {w.d_ab + w.d_bc!r}"
               if w is not None else "no witness found")
    worst = (None, None) if w is None else (w.d_ab + w.d_bc, w.d_ac)
    return _row(6, "Orbit-triangle counterexample", ok, tol, summary, worst,
                witness=None if w is None else [list(w.a), list(w.b), list(w.c)],
                d_ac=None if w is None else w.d_ac,
                d_ab_plus_d_bc=None if w is None else w.d_ab + w.d_bc)


def _cycle_instance() -> tuple:
    inst = FuncEqInstance(3, (1, 2, 0), affine_G([0.25] * 3, [1.0, 2.0, 3.0]),
                          euclidean(), "cycle")
    starts = [FunctionTable.of([(0.0,)] * 3), FunctionTable.of([(5.0,), (-5.0,), (1.0,)]),
              FunctionTable.of([(-10.0,), (2.0,), (7.0,)])]
    return inst, starts


def criterion_7(seed: int = 0) -> dict:
    """Every catalogue contraction reaches the same fixed point from 3 starts."""
    tol = 1e-9
    rows = []
    for e in standard_contractions():
        pts = [solve_fixed_point(e.space, e.map, s, TIGHT, e.kind, e.lam) for s in e.starts]
        spread = max(eval_metric(e.space, p.fixed_point, q.fixed_point)
                     for i, p in enumerate(pts) for q in pts[i + 1:])
        rows.append({"name": e.name, "spread": spread,
                     "converged": all(p.converged for p in pts)})
    inst, starts = _cycle_instance()
    certs = [solve_stability(inst, s, StabilityTheorem.BANACH_ORBIT, 0.25, TIGHT)
             for s in starts]
    spread = max(eval_metric(inst.space, p.exact_solution, q.exact_solution)
                 for i, p in enumerate(certs) for q in certs[i + 1:])
    rows.append({"name": "cycle_funceq", "spread": spread,
                 "converged": all(c.converged for c in certs)})
    ok = all(r["converged"] and r["spread"] <= tol for r in rows)
    worst = max(r["spread"] for r in rows)
    return _row(7, "Uniqueness", ok, tol,
                f"{len(rows)} contractions, max spread between starts {worst:.3e}",
                (tol, worst), cases=rows)


def criterion_8(seed: int = 0, grid_size: int = 10_000) -> dict:
    """Iterative and brute-force fixed points agree for 1-D catalogue maps."""
    extra = 1e-9
    rows = []
    for e in standard_contractions():
        if e.space.dimension != 1 or e.space.name != "euclidean":
            continue
        lo, hi = e.box[0]
        grid = [(float(x),) for x in np.linspace(lo, hi, grid_size)]
        spacing = (hi - lo) / (grid_size - 1)
        cert = solve_fixed_point(e.space, e.map, e.starts[0], TIGHT, e.kind, e.lam)
        bp, _ = brute_force_fixed_point(e.space, e.map, grid)
        gap = abs(bp[0] - cert.fixed_point[0])
        rows.append({"name": e.name, "gap": gap, "allowed": spacing + extra,
                     "passed": cert.converged and gap <= spacing + extra})
    ok = all(r["passed"] for r in rows)
    w = max(rows, key=lambda r: r["gap"] / r["allowed"])
    return _row(8, "Brute-force agreement", ok, extra,
                f"{len(rows)} maps on a {grid_size}-point grid; "
                f"worst gap/allowed {w['gap'] / w['allowed']:.3f}",
                (w["allowed"], w["gap"]), cases=rows)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8)


def run_criteria(seed: int = 0) -> list:
    return [c(seed) for c in CRITERIA]


def run_all(seed: int = 0) -> list:
    rows = run_criteria(seed)
    again = run_criteria(seed)
    same = (json.dumps(rows, sort_keys=True, default=str)
            == json.dumps(again, sort_keys=True, default=str))
    rows.append(_row(9, "Determinism", same, 0.0,
                     "two in-process runs serialize identically" if same
                     else "two in-process runs differ"))
    return rows
