"""JSON documents for bases, tori, paths, certificates and manifolds.

Every document carries "format": "lagtor/1".  Inputs are validated against
JSON schemas first; violations are reported with a JSON pointer.  Real
numbers are written as coefficient vectors over the document's basis,
each coefficient a decimal rational string such as "3" or "-1/2".
"""
from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .errors import SchemaError
from .exactnum import TRIVIAL_BASIS, SymBasis, SymReal, ZModule
from .pathengine.certificate import (
    PERMUTATION,
    STEP2,
    CertStep,
    IsotopyCertificate,
)
from .pathengine.moves import MovePath

FORMAT = "lagtor/1"

_RATIONAL = {
    "oneOf": [
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
        {"type": "integer"},
    ]
}
_COEFFS = {"type": "array", "items": _RATIONAL, "minItems": 1}
_VECTOR = {"type": "array", "items": _COEFFS}

BASIS_SCHEMA = {
    "type": "object",
    "required": ["symbols"],
    "properties": {
        "symbols": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "enclosure"],
                "properties": {
                    "name": {"type": "string"},
                    "enclosure": {"type": "array", "items": _RATIONAL, "minItems": 2, "maxItems": 2},
                },
            },
        }
    },
}

_HEADER = {"format": {"const": FORMAT}, "basis": BASIS_SCHEMA}

MANIFOLD_SCHEMA = {
    "type": "object",
    "required": ["generators"],
    "properties": {
        "format": {"const": FORMAT},
        "basis": BASIS_SCHEMA,
        "name": {"type": "string"},
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["sigma", "c1"],
                "properties": {"sigma": _COEFFS, "c1": {"type": "integer"}},
            },
        },
        "s0": {
            "oneOf": [
                {"type": "null"},
                {"type": "integer", "minimum": 0},
                {"type": "array", "items": {"type": "integer"}},
            ]
        },
    },
}

INPUT_SCHEMA = {
    "type": "object",
    "required": ["format"],
    "properties": {
        **_HEADER,
        "a": _VECTOR,
        "e": _VECTOR,
        "d": _VECTOR,
        "b": _COEFFS,
        "c": _COEFFS,
        "s": _VECTOR,
        "manifold": MANIFOLD_SCHEMA,
    },
}

TORUS_SCHEMA = {
    "type": "object",
    "required": ["format", "components"],
    "properties": {
        **_HEADER,
        "type": {"const": "torus"},
        "components": {**_VECTOR, "minItems": 1},
        "capacity": {"oneOf": [{"type": "null"}, _COEFFS]},
    },
}

_MOVE = {
    "type": "object",
    "required": ["kind", "i", "j"],
    "properties": {"kind": {"type": "string"}, "i": {"type": "integer"}, "j": {"type": "integer"}},
}

PATH_SCHEMA = {
    "type": "object",
    "required": ["format", "type", "start", "moves"],
    "properties": {
        **_HEADER,
        "type": {"const": "path"},
        "start": {**_VECTOR, "minItems": 1},
        "end": _VECTOR,
        "moves": {"type": "array", "items": _MOVE},
    },
}

_STEP = {
    "type": "object",
    "required": ["kind", "from", "to", "ball"],
    "properties": {
        "kind": {"type": "string"},
        "from": _VECTOR,
        "to": _VECTOR,
        "ball": _COEFFS,
        "perm": {"type": "array", "items": {"type": "integer"}},
        "i": {"type": "integer"},
        "j": {"type": "integer"},
        "direction": {"type": "string"},
    },
}

CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["format", "type", "start", "target", "steps", "overall_ball"],
    "properties": {
        **_HEADER,
        "type": {"const": "certificate"},
        "start": {**_VECTOR, "minItems": 1},
        "target": {**_VECTOR, "minItems": 1},
        "steps": {"type": "array", "items": _STEP},
        "overall_ball": _COEFFS,
        "bound": _COEFFS,
    },
}


def pointer(path) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def validate(doc, schema):
    validator = jsonschema.Draft202012Validator(schema)
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        raise SchemaError(pointer(err.absolute_path) or "/", err.message)


# ------------------------------------------------------------ scalars


def rational_to_json(q) -> str:
    return str(q)


def rational_from_json(x, where: str):
    if isinstance(x, bool):
        raise SchemaError(where, "booleans are not numbers")
    try:
        q = Fraction(x.replace(" ", "")) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(where, f"not a rational: {x!r}") from None
    return q.numerator if q.denominator == 1 else q


def basis_to_json(basis: SymBasis) -> dict:
    return {
        "symbols": [
            {"name": n, "enclosure": [rational_to_json(a), rational_to_json(b)]}
            for n, a, b in zip(basis.names, basis.lo, basis.hi)
        ]
    }


def basis_from_json(doc, where: str = "/basis") -> SymBasis:
    validate(doc, BASIS_SCHEMA)
    syms = doc["symbols"]
    first = syms[0]
    if first["name"] != "1" or [rational_from_json(x, where) for x in first["enclosure"]] != [1, 1]:
        raise SchemaError(where + "/symbols/0", 'the first symbol must be "1" with enclosure [1, 1]')
    rest = []
    for n, s in enumerate(syms[1:], start=1):
        lo, hi = (rational_from_json(x, f"{where}/symbols/{n}/enclosure") for x in s["enclosure"])
        rest.append((s["name"], lo, hi))
    try:
        return SymBasis(rest)
    except Exception as exc:
        raise SchemaError(where, str(exc)) from None


def symreal_to_json(x: SymReal) -> list:
    return [rational_to_json(c) for c in x.coeffs]


def symreal_from_json(coeffs, basis: SymBasis, where: str) -> SymReal:
    if not isinstance(coeffs, list):
        raise SchemaError(where, "expected a coefficient vector")
    if len(coeffs) != len(basis):
        raise SchemaError(where, f"expected {len(basis)} coefficients, got {len(coeffs)}")
    return SymReal._raw(basis, tuple(rational_from_json(c, f"{where}/{n}") for n, c in enumerate(coeffs)))


def vector_to_json(v) -> list:
    return [symreal_to_json(x) for x in v]


def vector_from_json(items, basis: SymBasis, where: str) -> tuple:
    return tuple(symreal_from_json(c, basis, f"{where}/{n}") for n, c in enumerate(items))


def zmodule_to_json(m: ZModule) -> dict:
    return {"rank": m.rank, "hnf": [[rational_to_json(q) for q in r] for r in m.hnf]}


def _basis_of(doc) -> SymBasis:
    if "basis" in doc:
        return basis_from_json(doc["basis"])
    return TRIVIAL_BASIS


def header(basis: SymBasis, kind: str | None = None) -> dict:
    out = {"format": FORMAT}
    if kind:
        out["type"] = kind
    out["basis"] = basis_to_json(basis)
    return out


# ------------------------------------------------------------ documents


def path_to_json(p: MovePath) -> dict:
    doc = header(p.start[0].basis, "path")
    doc["start"] = vector_to_json(p.start)
    doc["end"] = vector_to_json(p.end)
    doc["moves"] = [m.to_json() for m in p.moves]
    return doc


def path_from_json(doc) -> tuple:
    """(start, moves as (kind, i, j), end or None); no move is replayed here."""
    validate(doc, PATH_SCHEMA)
    basis = _basis_of(doc)
    start = vector_from_json(doc["start"], basis, "/start")
    end = vector_from_json(doc["end"], basis, "/end") if "end" in doc else None
    moves = [(m["kind"], m["i"], m["j"]) for m in doc["moves"]]
    return start, moves, end


def certificate_to_json(cert: IsotopyCertificate) -> dict:
    doc = header(cert.start[0].basis, "certificate")
    doc["start"] = vector_to_json(cert.start)
    doc["target"] = vector_to_json(cert.target)
    steps = []
    for s in cert.steps:
        item = {"kind": s.kind}
        if s.kind == PERMUTATION:
            item["perm"] = list(s.perm)
        else:
            item.update({"i": s.i, "j": s.j, "direction": s.direction})
        item["from"] = vector_to_json(s.frm)
        item["to"] = vector_to_json(s.to)
        item["ball"] = symreal_to_json(s.ball)
        steps.append(item)
    doc["steps"] = steps
    doc["overall_ball"] = symreal_to_json(cert.overall_ball)
    doc["bound"] = symreal_to_json(cert.bound)
    return doc


def certificate_from_json(doc) -> IsotopyCertificate:
    validate(doc, CERTIFICATE_SCHEMA)
    basis = _basis_of(doc)
    steps = []
    for n, s in enumerate(doc["steps"]):
        w = f"/steps/{n}"
        steps.append(CertStep(
            kind=s["kind"],
            frm=vector_from_json(s["from"], basis, w + "/from"),
            to=vector_from_json(s["to"], basis, w + "/to"),
            ball=symreal_from_json(s["ball"], basis, w + "/ball"),
            perm=tuple(s["perm"]) if "perm" in s else None,
            i=s.get("i"),
            j=s.get("j"),
            direction=s.get("direction"),
        ))
    return IsotopyCertificate(
        start=vector_from_json(doc["start"], basis, "/start"),
        target=vector_from_json(doc["target"], basis, "/target"),
        steps=tuple(steps),
        overall_ball=symreal_from_json(doc["overall_ball"], basis, "/overall_ball"),
    )


def torus_to_json(t) -> dict:
    doc = header(t.basis, "torus")
    doc["components"] = vector_to_json(t.a)
    doc["capacity"] = None if t.capacity is None else symreal_to_json(t.capacity)
    return doc


def torus_from_json(doc):
    from .invariants import TorusSpec

    validate(doc, TORUS_SCHEMA)
    basis = _basis_of(doc)
    a = vector_from_json(doc["components"], basis, "/components")
    cap = doc.get("capacity")
    b = None if cap is None else symreal_from_json(cap, basis, "/capacity")
    return TorusSpec(a, b)


def input_from_json(doc) -> dict:
    """Generic command input: optional vectors a, e, d, s and scalars b, c."""
    validate(doc, INPUT_SCHEMA)
    basis = _basis_of(doc)
    out = {"basis": basis}
    for key in ("a", "e", "d", "s"):
        if key in doc:
            out[key] = vector_from_json(doc[key], basis, "/" + key)
    for key in ("b", "c"):
        if key in doc:
            out[key] = symreal_from_json(doc[key], basis, "/" + key)
    if "manifold" in doc:
        out["manifold"] = doc["manifold"]
    return out


def load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON: {exc}") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
