"""``fixpoint`` command line.

Exit codes: 0 pass, 1 hypothesis or bound failure, 2 input error,
3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

import numpy as np

from . import report as rp
from .contractions import (ContractionKind, estimate_lambda, grid_pairs, random_pairs,
                           random_points, verify_condition)
from .funceq import (InternalConsistencyError, StabilityTheorem, check_sup_contraction,
                     solve_baker, solve_stability)
from .instances import Instance, InstanceError, load_instance
from .metric import FunctionTable, RejectedInput, check_axioms, check_triangle_on_set
from .picard import DomainError, DivergenceError, brute_force_fixed_point, solve_fixed_point
from .report import Verdict
from .rng import SplitMix64

AXIOM_SAMPLE = 64
RANDOM_PAIRS = 64
TABLE_PAIRS = 64
BRUTE_FORCE_GRID = 10_000


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _per_axis(d: int) -> int:
    return {1: 21, 2: 9, 3: 5}.get(d, 3)


def pair_set(inst: Instance) -> list:
    """Grid pairs over the instance box plus seeded uniform pairs."""
    return (grid_pairs(inst.box, _per_axis(inst.dimension))
            + random_pairs(inst.box, RANDOM_PAIRS, inst.seed))


def table_pairs(inst: Instance) -> list:
    rng = SplitMix64(inst.seed)
    n = inst.funceq.domain_size if inst.funceq else inst.baker.domain_size

    def table():
        return FunctionTable.of(random_points(inst.box, n, rng))

    pairs = [(table(), table()) for _ in range(TABLE_PAIRS)]
    return [(inst.start, b) for _, b in pairs[:4]] + pairs


def _base_report(command: str, inst: Instance) -> dict:
    return {"command": command, "input": inst.raw, "seed": inst.seed}


def cmd_check_metric(inst: Instance) -> dict:
    rng = SplitMix64(inst.seed)
    sample = random_points(inst.box, AXIOM_SAMPLE, rng)
    axioms = check_axioms(inst.space, sample, inst.witnesses)
    tri_ok, w = check_triangle_on_set(inst.space, sample)
    out = _base_report("check-metric", inst)
    out["axioms"] = rp.axiom_report_dict(axioms)
    out["axioms"]["sample_size"] = len(sample)
    out["axioms"]["witnesses_checked"] = len(inst.witnesses)
    out["hypotheses"] = {
        "triangle_status": inst.space.triangle_status.value,
        "triangle_on_sample": tri_ok,
        "triangle_witness": rp.witness_dict(w),
    }
    out["verdict"] = (Verdict.PASS if axioms.all_pass else Verdict.FAIL).value
    return out


def cmd_classify(inst: Instance) -> dict:
    if inst.kind != "MAP":
        raise CliError("classify needs a MAP instance", rp.EXIT_INPUT)
    pairs = pair_set(inst)
    reports = [estimate_lambda(inst.space, inst.map, k, pairs)
               for k in (ContractionKind.BANACH, ContractionKind.KANNAN,
                         ContractionKind.CHATTERJEA)]
    out = _base_report("classify", inst)
    out["estimates"] = {r.kind.value: rp.contraction_report_dict(r) for r in reports}
    out["verdict"] = (Verdict.PASS if any(r.admissible for r in reports)
                      else Verdict.FAIL).value
    return out


def _contraction_check(ok: bool, witness, kind: str, lam: float, count: int) -> dict:
    return {"kind": kind, "lambda": lam, "holds": ok, "pairs_checked": count,
            "witness": rp.jsonable(witness)}


def cmd_solve(inst: Instance) -> dict:
    if inst.kind != "MAP" or inst.theorem is None:
        raise CliError("solve needs a MAP instance with start, theorem and lambda",
                       rp.EXIT_INPUT)
    kind = ContractionKind(inst.theorem)
    out = _base_report("solve", inst)
    pairs = pair_set(inst)
    try:
        ok, witness = verify_condition(inst.space, inst.map, kind, inst.lam, pairs,
                                       coeffs=inst.ciric, tol=inst.config.tol)
        cert = solve_fixed_point(inst.space, inst.map, inst.start, inst.config, kind, inst.lam)
    except (DomainError, RejectedInput) as exc:
        out["error"] = str(exc)
        out["verdict"] = Verdict.NOT_APPLICABLE.value
        return out
    c = rp.fixed_point_cert_dict(cert)
    out["hypotheses"] = {
        "contraction": _contraction_check(ok, witness, kind.value, inst.lam, len(pairs)),
        "orbit_triangle": c["orbit_triangle_ok"],
        "orbital_continuity": "assumed" if kind is not ContractionKind.BANACH else "not required",
    }
    out["certificate"] = c
    if inst.dimension == 1:
        lo, hi = inst.box[0]
        grid = [(float(x),) for x in np.linspace(lo, hi, BRUTE_FORCE_GRID)]
        bp, res = brute_force_fixed_point(inst.space, inst.map, grid)
        spacing = (hi - lo) / (BRUTE_FORCE_GRID - 1)
        gap = abs(bp[0] - cert.fixed_point[0])
        out["cross_check"] = {"brute_force_point": list(bp), "brute_force_residual": res,
                              "grid_spacing": spacing, "gap": gap,
                              "agrees": gap <= spacing + inst.config.tol}
    out["verdict"] = _verdict(ok, cert.orbit_triangle_ok, cert.converged,
                              cert.bound_satisfied).value
    return out


def _verdict(contraction_ok: bool, triangle_ok, converged: bool, bound_ok) -> Verdict:
    if not contraction_ok or triangle_ok is False or bound_ok is None:
        return Verdict.NOT_APPLICABLE
    if not converged:
        return Verdict.NON_CONVERGED
    return Verdict.PASS if bound_ok else Verdict.FAIL


def cmd_certify(inst: Instance) -> dict:
    if inst.kind not in ("FUNCEQ", "BAKER"):
        raise CliError("certify needs a FUNCEQ or BAKER instance", rp.EXIT_INPUT)
    out = _base_report("certify", inst)
    pairs = table_pairs(inst)
    try:
        if inst.kind == "BAKER":
            funceq = inst.baker.to_funceq()
            kind = ContractionKind.BANACH
            ok, witness = check_sup_contraction(funceq, kind, pairs, inst.lam,
                                                tol=inst.config.tol)
            cert = solve_baker(inst.baker, inst.start, inst.config)
        else:
            kind = StabilityTheorem(inst.theorem).kind
            ok, witness = check_sup_contraction(inst.funceq, kind, pairs, inst.lam,
                                                coeffs=inst.ciric, tol=inst.config.tol)
            cert = solve_stability(inst.funceq, inst.start, inst.theorem, inst.lam, inst.config)
    except (DomainError, RejectedInput) as exc:
        out["error"] = str(exc)
        out["verdict"] = Verdict.NOT_APPLICABLE.value
        return out
    except InternalConsistencyError as exc:
        out["error"] = str(exc)
        out["verdict"] = Verdict.FAIL.value
        out["internal_inconsistency"] = True
        return out
    out["hypotheses"] = {
        "lifted_contraction": _contraction_check(ok, witness, kind.value, inst.lam, len(pairs)),
        "orbit_triangle": rp.stability_cert_dict(cert)["orbit_triangle_ok"],
    }
    out["certificate"] = rp.stability_cert_dict(cert)
    out["verdict"] = _verdict(ok, cert.orbit_triangle_ok, cert.converged,
                              cert.bound_satisfied).value
    return out


def cmd_repro(seed: int) -> dict:
    from .repro import run_all
    rows = run_all(seed)
    passed = all(r["passed"] for r in rows)
    return {"command": "repro", "seed": seed, "criteria": rows,
            "verdict": (Verdict.PASS if passed else Verdict.FAIL).value}


COMMANDS = {
    "check-metric": cmd_check_metric,
    "classify": cmd_classify,
    "solve": cmd_solve,
    "certify": cmd_certify,
}


def exit_code(report: dict) -> int:
    if report.get("internal_inconsistency"):
        return rp.EXIT_INTERNAL
    return rp.EXIT_PASS if report["verdict"] == Verdict.PASS.value else rp.EXIT_FAIL


def _flags(prefix: str = "") -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", dest=prefix + "out",
                   help="write the machine-readable JSON report here")
    p.add_argument("--seed", dest=prefix + "seed", type=int, help="override the instance seed")
    p.add_argument("--tol", dest=prefix + "tol", type=float,
                   help="override the instance tolerance")
    return p


def build_parser() -> argparse.ArgumentParser:
    # flags are accepted before or after the subcommand; separate dests keep
    # the subparser defaults from clobbering values given up front
    parser = argparse.ArgumentParser(
        prog="fixpoint", parents=[_flags("global_")],
        description="Fixed-point certificates in non-triangular metric spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("check-metric", "check metric axioms on a seeded sample"),
                        ("classify", "estimate contraction constants of a map"),
                        ("solve", "iterate a map to its fixed point and certify the bound"),
                        ("certify", "certify stability of a functional equation")]:
        p = sub.add_parser(name, parents=[_flags()], help=help_)
        p.add_argument("file", help="JSON instance file")
    sub.add_parser("repro", parents=[_flags()], help="run the reproduction suite")
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("out", "seed", "tol"):
        if getattr(args, name) is None:
            setattr(args, name, getattr(args, "global_" + name))
    try:
        if args.command == "repro":
            report = cmd_repro(args.seed if args.seed is not None else 0)
        else:
            inst = load_instance(args.file, seed=args.seed, tol=args.tol)
            report = COMMANDS[args.command](inst)
    except (InstanceError, OSError) as exc:
        print(f"fixpoint: input error: {exc}", file=sys.stderr)
        return rp.EXIT_INPUT
    except CliError as exc:
        print(f"fixpoint: {exc}", file=sys.stderr)
        return exc.code
    except DivergenceError as exc:
        print(f"fixpoint: divergence: {exc}", file=sys.stderr)
        return rp.EXIT_FAIL
    report = rp.jsonable(report)
    text = rp.dumps(report)
    if args.out:
        rp.write_atomic(args.out, text)
    sys.stdout.write(rp.render_text(report))
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
