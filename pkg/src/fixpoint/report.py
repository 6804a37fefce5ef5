"""Machine-readable reports and their plain-text rendering.

A report is a plain dict that serializes to JSON.  The text summary printed
by the CLI is rendered from that dict and never recomputes anything.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from enum import Enum
from pathlib import Path

from .contractions import ContractionReport
from .funceq import StabilityCertificate
from .metric import AxiomReport, FunctionTable, TriangleWitness
from .picard import FixedPointCertificate

NOT_APPLICABLE = "NOT_APPLICABLE"
NOT_CHECKED = "NOT_CHECKED"
UNBOUNDED = "UNBOUNDED"


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    NON_CONVERGED = "NON_CONVERGED"


EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def jsonable(x):
    if isinstance(x, FunctionTable):
        return [list(p) for p in x.values]
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, float) and math.isinf(x):
        return UNBOUNDED
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def witness_dict(w: TriangleWitness | None):
    if w is None:
        return None
    return {"points": jsonable([w.a, w.b, w.c]), "indices": list(w.indices),
            "d_ac": w.d_ac, "d_ab": w.d_ab, "d_bc": w.d_bc}


def axiom_report_dict(r: AxiomReport) -> dict:
    return {
        "n1_pass": r.n1_pass, "n2_pass": r.n2_pass, "n3_pass": r.n3_pass,
        "violations": [{"axiom": v.axiom, "points": jsonable(v.points),
                        "values": jsonable(v.values)} for v in r.violations],
    }


def contraction_report_dict(r: ContractionReport) -> dict:
    return {
        "kind": r.kind.value, "lambda_estimate": jsonable(r.lambda_estimate),
        "admissible": r.admissible, "worst_pair": jsonable(r.worst_pair),
        "pairs_checked": r.pairs_checked, "informative": r.informative,
    }


def _tri(ok):
    return NOT_CHECKED if ok is None else ok


def fixed_point_cert_dict(c: FixedPointCertificate) -> dict:
    return {
        "fixed_point": jsonable(c.fixed_point), "iterations_used": c.iterations_used,
        "residual": c.residual, "theorem": c.theorem, "delta": c.delta, "lambda": c.lam,
        "theoretical_bound": c.theoretical_bound,
        "observed_start_distance": c.observed_start_distance,
        "bound_satisfied": c.bound_satisfied, "orbit_triangle_ok": _tri(c.orbit_triangle_ok),
        "orbit_witness": witness_dict(c.orbit_witness),
        "orbit_iterates_checked": c.orbit_iterates_checked,
        "converged": c.converged, "tol": c.tol, "assumptions": list(c.assumptions),
    }


def stability_cert_dict(c: StabilityCertificate) -> dict:
    return {
        "theorem": c.theorem, "delta": c.delta, "lambda": c.lam,
        "exact_solution": jsonable(c.exact_solution), "sup_distance": c.sup_distance,
        "theoretical_bound": NOT_APPLICABLE if c.theoretical_bound is None else c.theoretical_bound,
        "bound_satisfied": NOT_APPLICABLE if c.bound_satisfied is None else c.bound_satisfied,
        "residual": c.residual, "orbit_triangle_ok": _tri(c.orbit_triangle_ok),
        "orbit_witness": witness_dict(c.orbit_witness),
        "orbit_iterates_checked": c.orbit_iterates_checked,
        "converged": c.converged, "iterations_used": c.iterations_used, "tol": c.tol,
        "reason": c.reason, "oracle_distance": c.oracle_distance,
        "assumptions": list(c.assumptions),
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flat(prefix: str, value, out: list) -> None:
    if isinstance(value, dict):
        for k in sorted(value):
            _flat(f"{prefix}.{k}" if prefix else k, value[k], out)
    else:
        out.append((prefix, value))


def render_text(report: dict) -> str:
    """Plain-text summary derived from a report dict."""
    lines = [f"fixpoint {report.get('command', '')}: {report.get('verdict', '')}"]
    if report.get("command") == "repro":
        for row in report["criteria"]:
            status = "PASS" if row["passed"] else "FAIL"
            lines.append(f"  [{status}] {row['id']:>2}. {row['name']}: {row['summary']}")
            if row.get("bound") is not None:
                lines.append(f"        bound {row['bound']!r}  observed {row['observed']!r}  "
                             f"margin {row['margin']!r}")
        return "\n".join(lines) + "\n"
    if "error" in report:
        lines.append(f"  error: {report['error']}")
    for section in ("hypotheses", "axioms", "estimates", "certificate", "cross_check"):
        if section not in report:
            continue
        lines.append(f"  {section}:")
        flat: list = []
        _flat("", report[section], flat)
        for key, val in flat:
            text = json.dumps(val)
            if isinstance(val, list) and len(text) > 200:
                text = f"<list of {len(val)} entries; see machine report>"
            lines.append(f"    {key} = {text}")
    return "\n".join(lines) + "\n"
