"""JSON instance files (schema version 1).

Three kinds share the envelope ``{"schema_version": 1, "kind": ...}``:

MAP
    ``metric``, ``dimension``, ``map`` = ``{"name": ..., "params": {...}}``,
    ``start`` (point), ``theorem`` (BANACH/KANNAN/CHATTERJEA/CIRIC), ``lambda``,
    optional ``ciric_coefficients`` (five numbers), ``box``, ``witnesses``.
FUNCEQ
    ``metric``, ``dimension``, ``n``, ``psi``, ``G`` (``{"family": "affine",
    "a": [...], "c": [...]}`` or ``{"family": "scaled_cos", "amplitude": [...],
    "shift": [...]}``), ``start`` (table), ``theorem`` (T4.2-BANACH-SUP ...
    T4.6-CIRIC), ``lambda``, optional ``ciric_coefficients``, ``box``.
BAKER
    ``dimension``, ``n``, ``psi``, ``lambda_fn``, ``B`` (table), ``norm``
    (euclidean/max/weighted_sum), optional ``weights``, ``start`` (table).

A file without ``kind`` is a bare metric block (``metric``, ``dimension``,
optional ``box`` and ``witnesses``).  Every kind accepts ``config`` =
``{"max_iters", "tol", "window", "seed"}`` and ``description``.  Unknown
fields are errors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from . import catalogue
from .contractions import CiricCoefficients, ContractionKind, MapUnderTest
from .funceq import BakerInstance, FuncEqInstance, StabilityTheorem
from .metric import (FunctionTable, MetricSpace, RejectedInput, WitnessSequence,
                     make_point, metric_by_name, norm_space)
from .picard import IterationConfig

SCHEMA_VERSION = 1

_COMMON = {"schema_version", "kind", "config", "description"}
_FIELDS = {
    None: _COMMON | {"metric", "dimension", "box", "witnesses"},
    "MAP": _COMMON | {"metric", "dimension", "map", "start", "theorem", "lambda",
                      "ciric_coefficients", "box", "witnesses"},
    "FUNCEQ": _COMMON | {"metric", "dimension", "n", "psi", "G", "start", "theorem",
                         "lambda", "ciric_coefficients", "box"},
    "BAKER": _COMMON | {"dimension", "n", "psi", "lambda_fn", "B", "norm", "weights",
                        "start", "theorem"},
}
_CONFIG_FIELDS = {"max_iters", "tol", "window", "seed"}


class InstanceError(ValueError):
    """Malformed instance file; the message names the offending field."""


@dataclass
class Instance:
    kind: Optional[str]
    raw: dict
    dimension: int
    config: IterationConfig
    seed: int
    space: Optional[MetricSpace] = None
    box: tuple = ()
    witnesses: tuple = ()
    map: Optional[MapUnderTest] = None
    start: Any = None
    theorem: Optional[str] = None
    lam: Optional[float] = None
    ciric: Optional[CiricCoefficients] = None
    funceq: Optional[FuncEqInstance] = None
    baker: Optional[BakerInstance] = None


def _req(d: dict, key: str):
    if key not in d:
        raise InstanceError(f"missing required field {key!r}")
    return d[key]


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise InstanceError(f"field {where!r} must be a finite number, got {value!r}")
    return float(value)


def _int(value, where: str, lo: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < lo:
        raise InstanceError(f"field {where!r} must be an integer >= {lo}, got {value!r}")
    return value


def _table(value, n: int, d: int, where: str) -> FunctionTable:
    if not isinstance(value, list) or len(value) != n:
        raise InstanceError(f"field {where!r} must be a list of {n} points")
    rows = []
    for i, v in enumerate(value):
        p = _point(v, d, f"{where}[{i}]")
        rows.append(p)
    return FunctionTable.of(rows)


def _point(value, d: int, where: str):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or len(value) != d:
        raise InstanceError(f"field {where!r} must be a point with {d} coordinate(s)")
    return make_point(_num(x, f"{where}[{i}]") for i, x in enumerate(value))


def _box(value, d: int, default: float) -> tuple:
    if value is None:
        return ((-default, default),) * d
    if not isinstance(value, list) or len(value) != d:
        raise InstanceError(f"field 'box' must list {d} [lo, hi] intervals")
    out = []
    for i, iv in enumerate(value):
        if not isinstance(iv, list) or len(iv) != 2:
            raise InstanceError(f"field 'box[{i}]' must be [lo, hi]")
        lo, hi = _num(iv[0], f"box[{i}][0]"), _num(iv[1], f"box[{i}][1]")
        if lo > hi:
            raise InstanceError(f"field 'box[{i}]' has lo > hi")
        out.append((lo, hi))
    return tuple(out)


def _config(value, overrides: dict) -> tuple:
    value = dict(value or {})
    extra = set(value) - _CONFIG_FIELDS
    if extra:
        raise InstanceError(f"unknown field(s) in 'config': {', '.join(sorted(extra))}")
    kw = {}
    if "max_iters" in value:
        kw["max_iters"] = _int(value["max_iters"], "config.max_iters", 1)
    if "window" in value:
        kw["window"] = _int(value["window"], "config.window", 1)
    if "tol" in value:
        kw["tol"] = _num(value["tol"], "config.tol")
    seed = _int(value.get("seed", 0), "config.seed")
    if overrides.get("tol") is not None:
        kw["tol"] = overrides["tol"]
    if overrides.get("seed") is not None:
        seed = overrides["seed"]
    try:
        return IterationConfig(**kw), seed
    except RejectedInput as exc:
        raise InstanceError(f"invalid 'config': {exc}") from None


def _psi(value, n: int) -> tuple:
    if not isinstance(value, list) or len(value) != n:
        raise InstanceError(f"field 'psi' must list {n} indices")
    return tuple(_int(v, f"psi[{i}]") for i, v in enumerate(value))


def _ciric(value) -> Optional[CiricCoefficients]:
    if value is None:
        return None
    if not isinstance(value, list) or len(value) != 5:
        raise InstanceError("field 'ciric_coefficients' must list five numbers")
    return CiricCoefficients(tuple(_num(v, f"ciric_coefficients[{i}]")
                                   for i, v in enumerate(value)))


def parse_instance(data: Any, *, seed: Optional[int] = None,
                   tol: Optional[float] = None) -> Instance:
    """Validate a decoded JSON document and build the library objects it names."""
    if not isinstance(data, dict):
        raise InstanceError("instance file must contain a JSON object")
    version = _req(data, "schema_version")
    if version != SCHEMA_VERSION:
        raise InstanceError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    kind = data.get("kind")
    if kind not in _FIELDS:
        raise InstanceError(f"field 'kind' must be one of MAP, FUNCEQ, BAKER, got {kind!r}")
    unknown = set(data) - _FIELDS[kind]
    if unknown:
        raise InstanceError(f"unknown field(s): {', '.join(sorted(unknown))}")

    d = _int(_req(data, "dimension"), "dimension", 1)
    cfg, seed_ = _config(data.get("config"), {"seed": seed, "tol": tol})
    inst = Instance(kind, data, d, cfg, seed_)
    try:
        if kind == "BAKER":
            _parse_baker(inst, data, d)
        else:
            inst.space = metric_by_name(_req(data, "metric"), d)
            if kind is None:
                inst.box = _box(data.get("box"), d, 2.0)
                inst.witnesses = _witnesses(data.get("witnesses"), d)
            elif kind == "MAP":
                _parse_map(inst, data, d)
            else:
                _parse_funceq(inst, data, d)
    except InstanceError:
        raise
    except (RejectedInput, ValueError, TypeError) as exc:
        raise InstanceError(str(exc)) from None
    return inst


def _witnesses(value, d: int) -> tuple:
    if value is None:
        return ()
    if not isinstance(value, list):
        raise InstanceError("field 'witnesses' must be a list")
    out = []
    for i, w in enumerate(value):
        where = f"witnesses[{i}]"
        if not isinstance(w, dict) or set(w) != {"terms", "candidate_limits"}:
            raise InstanceError(f"field {where!r} needs exactly 'terms' and 'candidate_limits'")
        terms = w["terms"]
        if not isinstance(terms, list) or not terms:
            raise InstanceError(f"field '{where}.terms' must be a non-empty list")
        lims = w["candidate_limits"]
        if not isinstance(lims, list) or len(lims) != 2:
            raise InstanceError(f"field '{where}.candidate_limits' must hold two points")
        out.append(WitnessSequence(
            tuple(_point(t, d, f"{where}.terms[{j}]") for j, t in enumerate(terms)),
            (_point(lims[0], d, f"{where}.candidate_limits[0]"),
             _point(lims[1], d, f"{where}.candidate_limits[1]")),
        ))
    return tuple(out)


def _theorem_and_lambda(inst: Instance, data: dict, allowed) -> None:
    th = _req(data, "theorem")
    if th not in allowed:
        raise InstanceError(f"field 'theorem' must be one of {', '.join(allowed)}, got {th!r}")
    inst.theorem = th
    inst.lam = _num(_req(data, "lambda"), "lambda")
    inst.ciric = _ciric(data.get("ciric_coefficients"))
    needs_ciric = th in ("CIRIC", "T4.6-CIRIC")
    if needs_ciric and inst.ciric is None:
        raise InstanceError(f"theorem {th} requires 'ciric_coefficients'")


def _parse_map(inst: Instance, data: dict, d: int) -> None:
    spec = _req(data, "map")
    if not isinstance(spec, dict) or not set(spec) <= {"name", "params"}:
        raise InstanceError("field 'map' must be {\"name\": ..., \"params\": {...}}")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise InstanceError("field 'map.params' must be an object")
    inst.map = catalogue.map_by_name(_req(spec, "name"), d, params)
    inst.box = _box(data.get("box"), d, 2.0)
    inst.witnesses = _witnesses(data.get("witnesses"), d)
    if "start" in data or "theorem" in data:
        inst.start = _point(_req(data, "start"), d, "start")
        _theorem_and_lambda(inst, data, [k.value for k in ContractionKind])


def _parse_funceq(inst: Instance, data: dict, d: int) -> None:
    n = _int(_req(data, "n"), "n", 1)
    psi = _psi(_req(data, "psi"), n)
    spec = _req(data, "G")
    if not isinstance(spec, dict):
        raise InstanceError("field 'G' must be an object")
    family = spec.get("family")
    if family == "affine":
        if set(spec) != {"family", "a", "c"}:
            raise InstanceError("affine 'G' needs exactly 'family', 'a', 'c'")
        a = spec["a"]
        if not isinstance(a, list) or len(a) != n:
            raise InstanceError(f"field 'G.a' must list {n} numbers")
        G = catalogue.affine_G([_num(x, f"G.a[{i}]") for i, x in enumerate(a)], spec["c"], d)
    elif family == "scaled_cos":
        if set(spec) != {"family", "amplitude", "shift"}:
            raise InstanceError("scaled_cos 'G' needs exactly 'family', 'amplitude', 'shift'")
        amp = spec["amplitude"]
        if not isinstance(amp, list) or len(amp) != n:
            raise InstanceError(f"field 'G.amplitude' must list {n} numbers")
        G = catalogue.scaled_cos_G([_num(x, f"G.amplitude[{i}]") for i, x in enumerate(amp)],
                                   spec["shift"], d)
    else:
        raise InstanceError(f"field 'G.family' must be 'affine' or 'scaled_cos', got {family!r}")
    inst.funceq = FuncEqInstance(n, psi, G, inst.space, data.get("description", family))
    inst.start = _table(_req(data, "start"), n, d, "start")
    inst.box = _box(data.get("box"), d, 10.0)
    _theorem_and_lambda(inst, data, [t.value for t in StabilityTheorem if t.value != "T5-BAKER"])


def _parse_baker(inst: Instance, data: dict, d: int) -> None:
    n = _int(_req(data, "n"), "n", 1)
    psi = _psi(_req(data, "psi"), n)
    lams = _req(data, "lambda_fn")
    if not isinstance(lams, list) or len(lams) != n:
        raise InstanceError(f"field 'lambda_fn' must list {n} numbers")
    lams = tuple(_num(x, f"lambda_fn[{i}]") for i, x in enumerate(lams))
    B = _table(_req(data, "B"), n, d, "B")
    weights = data.get("weights")
    if weights is not None:
        if not isinstance(weights, list):
            raise InstanceError("field 'weights' must be a list")
        weights = [_num(w, f"weights[{i}]") for i, w in enumerate(weights)]
    norm = norm_space(_req(data, "norm"), d, weights)
    th = data.get("theorem", "T5-BAKER")
    if th != "T5-BAKER":
        raise InstanceError(f"BAKER instances use theorem T5-BAKER, got {th!r}")
    inst.theorem = th
    inst.space = norm
    inst.baker = BakerInstance(n, psi, lams, B, norm)
    inst.lam = inst.baker.lambda_max
    inst.start = _table(_req(data, "start"), n, d, "start")
    inst.box = ((-10.0, 10.0),) * d


def load_instance(path, *, seed: Optional[int] = None, tol: Optional[float] = None) -> Instance:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_instance(data, seed=seed, tol=tol)
