"""JSON documents in and out.

Input schemas: ``groupoid/v1``, ``ring/v1``, ``semigroupoid/v1``,
``fnfamily/v1`` and ``fnmap/v1``.  Output: ``reconstruction-report/v1``,
``pipeline-report/v1`` and friends, each stamped with schema and tool version.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import jsonschema
import numpy as np

from .coefficients import FiniteRing, Semigroupoid, from_ring, gf, trivial, validate_ring, validate_semigroupoid, zmod
from .functions import FnFamily, FnSpace, canonical_bumpy, closure, steinberg_family
from .groupoid import FiniteGroupoid, build_standard_groupoid, validate_groupoid
from .report import SCHEMA_TOOL_VERSION, Report, _jsonable


class SchemaError(ValueError):
    """A document that is not valid JSON or does not match its schema."""


_name = {"type": ["string", "integer"]}
_triples = {"type": "array", "items": {"type": "array", "items": _name, "minItems": 3, "maxItems": 3}}
_pairs = {"type": "array", "items": {"type": "array", "items": _name, "minItems": 2, "maxItems": 2}}

GROUPOID_V1 = {
    "type": "object",
    "properties": {
        "schema": {"const": "groupoid/v1"},
        "arrows": {"type": "array", "items": _name},
        "compose": _triples,
        "inverse": _pairs,
        "grading": {
            "type": "object",
            "properties": {"gamma": {"type": "object"}, "map": _pairs},
            "required": ["gamma", "map"],
        },
        "name": {"type": "string"},
    },
    "required": ["arrows", "compose", "inverse"],
}

# shorthand accepted wherever a groupoid is referenced: {"kind": "pair", "n": 2}
GROUPOID_REF = {
    "type": "object",
    "properties": {"kind": {"enum": ["group", "pair", "units", "transformation", "group_bundle"]}},
    "required": ["kind"],
}

RING_V1 = {
    "type": "object",
    "properties": {
        "schema": {"const": "ring/v1"},
        "elements": {"type": "array", "items": _name, "minItems": 1},
        "add": {"type": "array", "items": {"type": "array"}},
        "mul": {"type": "array", "items": {"type": "array"}},
        "zero": _name,
        "one": _name,
    },
    "required": ["elements", "add", "mul"],
}

SEMIGROUPOID_V1 = {
    "type": "object",
    "properties": {
        "schema": {"const": "semigroupoid/v1"},
        "elements": {"type": "array", "items": _name, "minItems": 1},
        "product": _triples,
        "unit": _name,
    },
    "required": ["elements", "product"],
}

_record = {"type": "object", "additionalProperties": _name}

FNFAMILY_V1 = {
    "type": "object",
    "properties": {
        "schema": {"const": "fnfamily/v1"},
        "groupoid": {"type": ["object", "string"]},
        "coefficients": {"type": ["object", "string"]},
        "mode": {"enum": ["bisection", "convolution"]},
        "generate": {"enum": ["canonical", "steinberg", "closure"]},
        "graded": {"type": "boolean"},
        "elements": {"type": "array", "items": _record},
        "name": {"type": "string"},
    },
    "required": ["schema", "groupoid", "coefficients"],
}

FNMAP_V1 = {
    "type": "object",
    "properties": {
        "schema": {"const": "fnmap/v1"},
        "pairs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2,
                                             "maxItems": 2}},
        "records": {"type": "array", "items": {"type": "array", "items": _record, "minItems": 2, "maxItems": 2}},
        "relabel": {"type": "object", "additionalProperties": _name},
        "identity": {"type": "boolean"},
    },
    "required": ["schema"],
}

SCHEMAS = {
    "groupoid/v1": GROUPOID_V1,
    "ring/v1": RING_V1,
    "semigroupoid/v1": SEMIGROUPOID_V1,
    "fnfamily/v1": FNFAMILY_V1,
    "fnmap/v1": FNMAP_V1,
}

BUILTIN_RINGS = {"F2": lambda: gf(2), "F3": lambda: gf(3), "F4": lambda: gf(4), "F5": lambda: gf(5),
                 "Z/4": lambda: zmod(4)}


def _check(doc: Any, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise SchemaError(f"{what}: {e.message}" + (f" at {path}" if path else "")) from None


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: malformed JSON ({e.msg}, line {e.lineno})") from None
    except OSError as e:
        raise SchemaError(f"{path}: {e.strerror}") from None


def dumps(doc: Any) -> str:
    """Canonical serialisation: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def schema_of(doc: Any) -> str:
    if not isinstance(doc, Mapping):
        raise SchemaError("document is not a JSON object")
    if "schema" in doc:
        if doc["schema"] not in SCHEMAS:
            raise SchemaError(f"unknown schema {doc['schema']!r}")
        return doc["schema"]
    if "arrows" in doc:
        return "groupoid/v1"
    raise SchemaError("document names no schema")


# -- loaders -----------------------------------------------------------------------


def _deref(ref: Any, base: Path | None) -> Any:
    if isinstance(ref, str) and ref.endswith(".json"):
        return read_json((base or Path(".")) / ref)
    return ref


def load_groupoid(doc: Any, base: Path | None = None) -> FiniteGroupoid:
    doc = _deref(doc, base)
    if isinstance(doc, Mapping) and "kind" in doc:
        _check(doc, GROUPOID_REF, "groupoid reference")
        params = {k: v for k, v in doc.items() if k != "kind"}
        return build_standard_groupoid(doc["kind"], **params)
    _check(doc, GROUPOID_V1, "groupoid/v1")
    return validate_groupoid(doc)


def load_coefficients(doc: Any, base: Path | None = None) -> tuple[Semigroupoid, FiniteRing | None]:
    """A coefficient reference: builtin name, ``ring/v1`` or ``semigroupoid/v1``."""
    doc = _deref(doc, base)
    if isinstance(doc, str):
        if doc in ("{1}", "1", "trivial"):
            return trivial(), None
        if doc not in BUILTIN_RINGS:
            raise SchemaError(f"unknown coefficient name {doc!r}")
        R = BUILTIN_RINGS[doc]()
        return from_ring(R), R
    kind = doc.get("schema") or ("ring/v1" if "add" in doc else "semigroupoid/v1")
    if kind == "ring/v1":
        _check(doc, RING_V1, "ring/v1")
        R = validate_ring(doc)
        return from_ring(R), R
    _check(doc, SEMIGROUPOID_V1, "semigroupoid/v1")
    return validate_semigroupoid(doc), None


def load_family(doc: Any, base: Path | None = None) -> FnFamily:
    """Build a family from ``fnfamily/v1``.

    ``generate`` selects the canonical bumpy family, the full Steinberg
    family or the closure of ``elements``; without it ``elements`` must list
    a multiplicatively closed set.
    """
    _check(doc, FNFAMILY_V1, "fnfamily/v1")
    G = load_groupoid(doc["groupoid"], base)
    Y, R = load_coefficients(doc["coefficients"], base)
    graded = bool(doc.get("graded", False))
    gen = doc.get("generate")
    name = doc.get("name", "")
    if gen == "canonical":
        return canonical_bumpy(G, Y, graded=graded, name=name)
    if gen == "steinberg":
        if R is None:
            raise SchemaError("steinberg families need ring coefficients")
        return steinberg_family(G, R, graded=graded, name=name)
    mode = doc.get("mode", "bisection")
    if mode == "convolution" and R is None:
        raise SchemaError("convolution mode needs ring coefficients")
    space = FnSpace(G, ring=R) if mode == "convolution" else FnSpace(G, Y)
    if "elements" not in doc:
        raise SchemaError("fnfamily/v1 needs 'elements' or 'generate'")
    try:
        fns = [space.parse(rec) for rec in doc["elements"]]
    except KeyError as e:
        raise SchemaError(f"element record names unknown arrow or value {e}") from None
    if gen == "closure":
        return closure(space, fns, mode=mode, name=name)
    rows = space.rows(fns)
    return FnFamily(space, rows, mode, name=name or "family")


def load_map(doc: Any, F1: FnFamily, F2: FnFamily) -> np.ndarray:
    """``fnmap/v1`` as an index array ``A -> A'`` (-1 where unmapped)."""
    from .pipeline import phi_from_arrow_map

    _check(doc, FNMAP_V1, "fnmap/v1")
    if doc.get("identity"):
        if F1.k != F2.k:
            return np.full(F1.k, -1, dtype=np.int64)
        return F2.lookup(F1.rows) if F1.G.n == F2.G.n else np.full(F1.k, -1, dtype=np.int64)
    if "relabel" in doc:
        try:
            f = [F2.G.index(str(doc["relabel"][a])) for a in F1.G.arrows]
        except KeyError as e:
            raise SchemaError(f"relabel misses or names unknown arrow {e}") from None
        return phi_from_arrow_map(F1, F2, f)
    phi = np.full(F1.k, -1, dtype=np.int64)
    if "pairs" in doc:
        for i, j in doc["pairs"]:
            if not (0 <= i < F1.k and 0 <= j < F2.k):
                raise SchemaError(f"element id out of range in pair {[i, j]}")
            phi[i] = j
        return phi
    if "records" in doc:
        for a, b in doc["records"]:
            i = F1.index_of(F1.space.parse(a))
            j = F2.index_of(F2.space.parse(b))
            if i is None or j is None:
                raise SchemaError(f"record pair {[a, b]} is not in the families")
            phi[i] = j
        return phi
    raise SchemaError("fnmap/v1 needs one of 'identity', 'relabel', 'pairs', 'records'")


def load_document(path: str | Path) -> tuple[str, Any]:
    """Read, schema-check and build whatever ``path`` holds."""
    path = Path(path)
    doc = read_json(path)
    kind = schema_of(doc)
    _check(doc, SCHEMAS[kind], kind)
    base = path.parent
    if kind == "groupoid/v1":
        return kind, validate_groupoid(doc, name=path.stem)
    if kind == "ring/v1":
        return kind, validate_ring(doc)
    if kind == "semigroupoid/v1":
        return kind, validate_semigroupoid(doc)
    if kind == "fnfamily/v1":
        return kind, load_family({"name": path.stem, **doc}, base)
    return kind, doc


# -- output --------------------------------------------------------------------------


def family_to_doc(F: FnFamily, idx=None) -> dict:
    doc = {
        "schema": "fnfamily/v1",
        "name": F.name,
        "groupoid": F.G.to_raw(),
        "coefficients": F.space.ring.to_raw() if F.space.ring is not None else F.Y.to_raw(),
        "mode": F.mode,
        "elements": F.to_records(idx),
    }
    return doc


def envelope(schema: str, report: Report, **extra) -> dict:
    doc = {"schema": schema, "tool_version": SCHEMA_TOOL_VERSION}
    doc.update(report.to_dict())
    doc["status"] = overall_status(report)
    doc.update({k: _jsonable(v) for k, v in extra.items()})
    return doc


def overall_status(report: Report) -> str:
    """``pass`` | ``fail`` | ``hypothesis-unmet`` | ``not-verified``, worst first."""
    seen = {c.status.value for c in report.clauses}
    for s in ("fail", "hypothesis-unmet", "not-verified"):
        if s in seen:
            return s
    return "pass"


def reconstruction_doc(F: FnFamily, report: Report) -> dict:
    """``reconstruction-report/v1``: ultrafilters as sorted member lists of element records."""
    table = report.data.get("bijection", {})
    records = {g: [F.space.describe(F.rows[a]) for a in members] for g, members in table.items()}
    return envelope("reconstruction-report/v1", report, family=F.name, arrows=len(F.G.arrows),
                    size_S=len(F.S), bijection=records)


def pipeline_doc(report: Report) -> dict:
    return envelope("pipeline-report/v1", report,
                    conditions=report.data.get("conditions", {}),
                    halted_at=report.data.get("halted_at"),
                    isomorphism=report.data.get("isomorphism"),
                    grades=report.data.get("grades"))
