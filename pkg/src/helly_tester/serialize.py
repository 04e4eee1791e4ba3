"""JSON instance files and tester result records.

Instance file layout (schema_version 1)::

    {"schema_version": 1, "dimension": 2, "sets": [
        {"type": "halfspace", "a": [1.0, 0.0], "b": 0.5},
        {"type": "hpolytope", "A": [[1.0, 0.0], [0.0, 1.0]], "b": [1.0, 1.0]},
        {"type": "box", "lo": [0.0, 0.0], "hi": [1.0, 1.0]},
        {"type": "ball", "center": [0.0, 0.0], "radius": 1.0}]}

Floats are written with ``repr``, which round-trips doubles exactly.
"""

from __future__ import annotations

import json
import re
from numbers import Real

from . import __version__
from .errors import HellyError, ParseError
from .feasibility import OracleConfig
from .geometry import Ball, Box, ConvexSet, Halfspace, HPolytope, Instance
from .tester import RNG_NAME, TesterConfig, Verdict

SCHEMA_VERSION = 1

_FIELDS = {
    "halfspace": {"a", "b"},
    "hpolytope": {"A", "b"},
    "box": {"lo", "hi"},
    "ball": {"center", "radius"},
}


def set_to_record(s: ConvexSet) -> dict:
    if isinstance(s, Halfspace):
        return {"type": "halfspace", "a": list(s.a), "b": s.b}
    if isinstance(s, HPolytope):
        return {"type": "hpolytope", "A": [list(r) for r in s.A], "b": list(s.b)}
    if isinstance(s, Box):
        return {"type": "box", "lo": list(s.lo), "hi": list(s.hi)}
    if isinstance(s, Ball):
        return {"type": "ball", "center": list(s.center), "radius": s.radius}
    raise TypeError(f"unsupported set type {type(s).__name__}")


def dumps_instance(instance: Instance) -> str:
    """Serialize with one set per line."""
    lines = [json.dumps(set_to_record(s), allow_nan=False) for s in instance.sets]
    body = ",\n    ".join(lines)
    return (
        "{\n"
        f'  "schema_version": {SCHEMA_VERSION},\n'
        f'  "dimension": {instance.dimension},\n'
        f'  "sets": [\n    {body}\n  ]\n'
        "}\n"
    )


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _set_lines(text: str) -> list[int]:
    """1-based line of each element of the top-level "sets" array, best effort."""
    match = re.search(r'"sets"\s*:\s*\[', text)
    if not match:
        return []
    decoder = json.JSONDecoder()
    pos, lines = match.end(), []
    while True:
        while pos < len(text) and text[pos] in " \t\r\n,":
            pos += 1
        if pos >= len(text) or text[pos] == "]":
            return lines
        lines.append(text.count("\n", 0, pos) + 1)
        try:
            _, pos = decoder.raw_decode(text, pos)
        except ValueError:
            return lines


def _numbers(value, what, line):
    if not isinstance(value, list) or not all(
        isinstance(v, Real) and not isinstance(v, bool) for v in value
    ):
        raise ParseError(f"{what} must be a list of numbers", line)
    return value


def _number(value, what, line):
    if not isinstance(value, Real) or isinstance(value, bool):
        raise ParseError(f"{what} must be a number", line)
    return value


def record_to_set(rec, line=None) -> ConvexSet:
    if not isinstance(rec, dict):
        raise ParseError("set record must be an object", line)
    kind = rec.get("type")
    if kind not in _FIELDS:
        raise ParseError(f"unknown set type {kind!r}", line)
    extra = set(rec) - _FIELDS[kind] - {"type"}
    missing = _FIELDS[kind] - set(rec)
    if missing or extra:
        raise ParseError(f"{kind}: missing {sorted(missing)}, unexpected {sorted(extra)}", line)
    try:
        if kind == "halfspace":
            return Halfspace(_numbers(rec["a"], "a", line), _number(rec["b"], "b", line))
        if kind == "hpolytope":
            if not isinstance(rec["A"], list):
                raise ParseError("A must be a list of rows", line)
            A = [_numbers(row, "A row", line) for row in rec["A"]]
            return HPolytope(A, _numbers(rec["b"], "b", line))
        if kind == "box":
            return Box(_numbers(rec["lo"], "lo", line), _numbers(rec["hi"], "hi", line))
        return Ball(_numbers(rec["center"], "center", line), _number(rec["radius"], "radius", line))
    except ParseError:
        raise
    except HellyError as exc:
        raise ParseError(f"{kind}: {exc}", line) from exc


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from exc
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"schema_version must be {SCHEMA_VERSION}", 1)
    dim = doc.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError("dimension must be a positive integer", 1)
    records = doc.get("sets")
    if not isinstance(records, list) or not records:
        raise ParseError("sets must be a nonempty list", 1)
    lines = _set_lines(text)
    sets = []
    for i, rec in enumerate(records):
        line = lines[i] if i < len(lines) else None
        s = record_to_set(rec, line)
        if s.dim != dim:
            raise ParseError(f"set {i} has dimension {s.dim}, expected {dim}", line)
        sets.append(s)
    return Instance(dim, sets)


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def result_record(verdict: Verdict, cfg: TesterConfig) -> dict:
    oracle = cfg.oracle
    record = {
        "verdict": verdict.label,
        "rounds_run": verdict.rounds_run,
        "oracle_calls": verdict.oracle_calls,
        "index_reads": verdict.index_reads,
        "config": {
            "alpha": cfg.alpha,
            "epsilon": cfg.epsilon,
            "t": cfg.rounds,
            "rounds_override": cfg.rounds_override,
            "seed": cfg.rng_seed,
            "rng": RNG_NAME,
            "oracle": {
                "feas_tol": oracle.feas_tol,
                "proj_tol": oracle.proj_tol,
                "proj_max_iters": oracle.proj_max_iters,
                "bound_M": oracle.bound_M,
                "rng_seed": oracle.rng_seed,
                "strict": oracle.strict,
            },
        },
        "version": __version__,
    }
    if not verdict.passed:
        record["round"] = verdict.round
        record["tuple_indices"] = list(verdict.tuple_indices)
    return record


def config_from_record(record: dict) -> TesterConfig:
    """Rebuild the TesterConfig echoed in a result record."""
    c = record["config"]
    return TesterConfig(
        alpha=c["alpha"],
        epsilon=c["epsilon"],
        rounds_override=c["rounds_override"],
        rng_seed=c["seed"],
        oracle=OracleConfig(**c["oracle"]),
    )


def verdict_from_record(record: dict) -> Verdict:
    failed = record["verdict"] == "FAIL"
    return Verdict(
        passed=not failed,
        rounds_run=record["rounds_run"],
        oracle_calls=record["oracle_calls"],
        index_reads=record["index_reads"],
        round=record.get("round"),
        tuple_indices=tuple(record["tuple_indices"]) if failed else None,
    )
