"""JSON interchange: rationals travel as "p/q" strings, never as floats."""
from __future__ import annotations

import re
from fractions import Fraction

from .geometry import HalfSpace, HPolytope
from .monomial import AffineMonoidGens, MonomialIdeal
from .semiring import AffineMonomial, MonoidPair, TropPoly

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")

RATIONAL_SCHEMA = {"anyOf": [{"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}, {"type": "integer"}]}
INT_VECTOR = {"type": "array", "items": {"type": "integer"}}
TROPPOLY_SCHEMA = {
    "type": "object",
    "required": ["terms"],
    "properties": {
        "dim": {"type": "integer", "minimum": 0},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["slope", "coeff"],
                "properties": {"slope": INT_VECTOR, "coeff": RATIONAL_SCHEMA},
                "additionalProperties": False,
            },
        },
    },
}
PAIR_SCHEMA = {
    "type": "object",
    "required": ["dim", "constraints"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["F", "lambda"],
                "properties": {"F": INT_VECTOR, "lambda": RATIONAL_SCHEMA},
                "additionalProperties": False,
            },
        },
    },
}
IDEAL_SCHEMA = {
    "type": "object",
    "required": ["dim", "gens"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "gens": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
}
MONOID_SCHEMA = {
    "type": "object",
    "required": ["gens", "degree_bound"],
    "properties": {
        "gens": {"type": "array", "minItems": 1, "items": INT_VECTOR},
        "degree_bound": {"type": "integer", "minimum": 1},
    },
}


def rational_to_json(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_json(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ValueError(f"rationals must be strings 'p/q' or integers, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _RATIONAL.match(s):
        raise ValueError(f"malformed rational {s!r}")
    return Fraction(s.replace(" ", ""))


def vector_to_json(v) -> list:
    return [rational_to_json(x) for x in v]


def vector_from_json(v) -> tuple:
    return tuple(rational_from_json(x) for x in v)


def monomial_to_json(t: AffineMonomial) -> dict:
    return {"slope": list(t.slope), "coeff": rational_to_json(t.coeff)}


def poly_to_json(f: TropPoly) -> dict:
    return {"dim": f.dim, "terms": [monomial_to_json(t) for t in f.terms]}


def poly_from_json(obj, dim: int | None = None) -> TropPoly:
    terms = [AffineMonomial(tuple(t["slope"]), rational_from_json(t["coeff"])) for t in obj["terms"]]
    if "dim" in obj:
        dim = obj["dim"]
    elif terms:
        dim = len(terms[0].slope)
    if dim is None:
        raise ValueError("an empty polynomial needs an explicit 'dim'")
    return TropPoly(dim, tuple(terms))


def pair_to_json(pair: MonoidPair) -> dict:
    return {
        "dim": pair.dim,
        "constraints": [{"F": list(F), "lambda": rational_to_json(lam)} for F, lam in pair.constraints],
    }


def pair_from_json(obj) -> MonoidPair:
    return MonoidPair(obj["dim"], tuple((tuple(c["F"]), rational_from_json(c["lambda"])) for c in obj["constraints"]))


def polytope_to_json(p: HPolytope) -> dict:
    return {
        "dim": p.dim,
        "halfspaces": [{"normal": list(h.normal), "bound": rational_to_json(h.bound)} for h in p.halfspaces],
    }


def polytope_from_json(obj) -> HPolytope:
    return HPolytope(obj["dim"], tuple(HalfSpace(tuple(h["normal"]), rational_from_json(h["bound"])) for h in obj["halfspaces"]))


def ideal_to_json(I: MonomialIdeal) -> dict:
    return {"dim": I.dim, "gens": [list(g) for g in I.gens]}


def ideal_from_json(obj) -> MonomialIdeal:
    return MonomialIdeal(obj["dim"], tuple(tuple(g) for g in obj["gens"]))


def monoid_to_json(m: AffineMonoidGens) -> dict:
    return {"gens": [list(g) for g in m.gens], "degree_bound": m.degree_bound}


def monoid_from_json(obj) -> AffineMonoidGens:
    return AffineMonoidGens(tuple(tuple(g) for g in obj["gens"]), obj["degree_bound"])


def to_jsonable(x):
    """Best-effort conversion of result objects (answers, witnesses) to JSON."""
    from dataclasses import fields, is_dataclass
    from enum import Enum

    if isinstance(x, Fraction):
        return rational_to_json(x)
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, TropPoly):
        return poly_to_json(x)
    if isinstance(x, AffineMonomial):
        return monomial_to_json(x)
    if isinstance(x, MonoidPair):
        return pair_to_json(x)
    if isinstance(x, HPolytope):
        return polytope_to_json(x)
    if isinstance(x, MonomialIdeal):
        return ideal_to_json(x)
    if is_dataclass(x):
        return {f.name: to_jsonable(getattr(x, f.name)) for f in fields(x)}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    return x
