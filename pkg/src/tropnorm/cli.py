"""Batch command-line front end.

Every command reads one JSON problem file and writes one result envelope::

    {"command": ..., "status": "ok" | "undetermined" | "error", "result": ...}

Exit codes: 0 ok, 2 undetermined (a bounded search ran out), 1 error.
"""
from __future__ import annotations

import argparse
import json
import json.scanner
import sys
import time
from pathlib import Path

import jsonschema

from . import serialize as ser
from .geometry import HPolytope
from .monomial import (
    dependence_oracle,
    integral_closure,
    reduction_number,
    saturate,
)
from .normalization import (
    DependenceWitness,
    canonical_form,
    integral_over,
    is_integrally_closed_elt,
    linearity_cells,
    pointwise_counterexample,
    pointwise_eq,
)
from .proptest import SUITES, run_suite
from .semiring import Answer, evaluate, join, syntactic_eq, syntactic_leq

COMMANDS = ("normalize", "eval", "leq", "eq", "closure", "integral-over", "reduction", "saturate", "proptest")
EXIT = {"ok": 0, "undetermined": 2, "error": 1}
DEFAULTS = {"radius": 1, "bound": 16, "n_max": None, "m_max": 8, "seed": 1, "cases": 100}

_POLY, _PAIR, _IDEAL = ser.TROPPOLY_SCHEMA, ser.PAIR_SCHEMA, ser.IDEAL_SCHEMA
PAYLOAD_SCHEMAS = {
    "normalize": {"required": ["poly", "pair"], "properties": {"poly": _POLY, "pair": _PAIR}},
    "eval": {"required": ["poly", "point"],
             "properties": {"poly": _POLY, "point": {"type": "array", "items": ser.RATIONAL_SCHEMA}}},
    "leq": {"required": ["f", "g", "pair"], "properties": {"f": _POLY, "g": _POLY, "pair": _PAIR}},
    "eq": {"required": ["f", "g", "pair"], "properties": {"f": _POLY, "g": _POLY, "pair": _PAIR}},
    "closure": {"oneOf": [{"required": ["ideal"]}, {"required": ["poly", "pair"]}],
                "properties": {"ideal": _IDEAL, "poly": _POLY, "pair": _PAIR}},
    "integral-over": {"required": ["x", "y", "pair"], "properties": {"x": _POLY, "y": _POLY, "pair": _PAIR}},
    "reduction": {"required": ["I"], "properties": {"I": _IDEAL, "J": _IDEAL}},
    "saturate": {"required": ["monoid"], "properties": {"monoid": ser.MONOID_SCHEMA}},
    "proptest": {"required": ["suite"], "properties": {"suite": {"enum": list(SUITES)}}},
}
PARAMETER_SCHEMA = {
    "type": "object",
    "properties": {k: {"type": "integer", "minimum": 0} for k in ("radius", "bound", "n_max", "m_max", "seed", "cases")},
    "additionalProperties": False,
}


class InputError(Exception):
    pass


def problem_schema(kind: str) -> dict:
    payload = {"type": "object", **PAYLOAD_SCHEMAS[kind]}
    return {
        "type": "object",
        "required": ["kind", "payload"],
        "properties": {"kind": {"const": kind}, "payload": payload, "parameters": PARAMETER_SCHEMA},
        "additionalProperties": False,
    }


def load_problem(text: str, kind: str, source: str = "<input>") -> dict:
    """Parse and schema-validate a problem file, with position-annotated errors."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from None
    _reject_floats(text, source)
    validator = jsonschema.Draft202012Validator(problem_schema(kind))
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
        raise InputError(f"{source}: at {where}: {e.message}")
    return obj


def _reject_floats(text: str, source: str):
    """Fail on the first JSON float literal, reporting its line and column."""
    decoder = json.JSONDecoder()

    def hook(literal):
        raise _FloatFound(literal)

    decoder.parse_float = hook
    decoder.scan_once = json.scanner.py_make_scanner(decoder)
    idx = 0
    while True:
        try:
            decoder.raw_decode(text, idx)
            return
        except _FloatFound as e:
            pos = _find_literal(text, e.args[0], idx)
            line = text.count("\n", 0, pos) + 1
            col = pos - text.rfind("\n", 0, pos)
            raise InputError(
                f"{source}:{line}:{col}: inexact number {e.args[0]}; write rationals as \"p/q\" strings"
            ) from None


class _FloatFound(Exception):
    pass


def _find_literal(text: str, literal: str, start: int) -> int:
    in_str = False
    i = start
    while i < len(text):
        ch = text[i]
        if in_str:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif text.startswith(literal, i) and (i == 0 or text[i - 1] in " \t\r\n:,["):
            return i
        i += 1
    return start


# ----------------------------------------------------------------------------


def _vertices_2d(poly: HPolytope) -> list:
    """Vertices of a polygon (or segment in 1-D), in counter-clockwise order."""
    hs = poly.halfspaces
    if poly.dim == 1:
        lo, hi = poly.bounding_box
        return [[lo[0]], [hi[0]]]
    pts = set()
    for h1, h2 in ((a, b) for i, a in enumerate(hs) for b in hs[i + 1:]):
        (a, b), (c, d) = h1.normal, h2.normal
        det = a * d - b * c
        if det == 0:
            continue
        x = (h1.bound * d - b * h2.bound) / det
        y = (a * h2.bound - c * h1.bound) / det
        if poly.contains((x, y)):
            pts.add((x, y))
    pts = sorted(pts)
    if len(pts) < 3:
        return [list(p) for p in pts]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)

    def angle_key(p):
        dx, dy = p[0] - cx, p[1] - cy
        half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
        return half, _Angle(dx, dy)

    return [list(p) for p in sorted(pts, key=angle_key)]


class _Angle:
    # exact angular comparison within one half-plane, via the cross product
    def __init__(self, dx, dy):
        self.dx, self.dy = dx, dy

    def __lt__(self, other):
        return self.dx * other.dy - self.dy * other.dx > 0


def emit_cells(f, pair, plot: bool = False) -> list[dict]:
    """Linearity cells of the canonical form: one H-polytope per essential term."""
    if plot and pair.dim > 2:
        raise InputError("--plot needs dimension <= 2; use --cells without --plot for raw H-representations")
    out = []
    for cell in linearity_cells(f, pair):
        rec = {
            "slope": list(cell["term"].slope),
            "coeff": ser.rational_to_json(cell["term"].coeff),
            "region": ser.polytope_to_json(cell["region"]),
        }
        if plot:
            rec["vertices"] = [ser.vector_to_json(v) for v in _vertices_2d(cell["region"])]
        out.append(rec)
    return out


def _order_result(ans, mode):
    return {"mode": mode, "answer": ans.status.value, "evidence": ser.to_jsonable(ans.evidence)}


def _pointwise(f, g, pair, both: bool):
    p = pointwise_counterexample(f, g, pair.delta)
    if p is None and both:
        p = pointwise_counterexample(g, f, pair.delta)
    res = {"mode": "pointwise", "answer": "yes" if p is None else "no"}
    if p is not None:
        res["distinguishing_point"] = ser.vector_to_json(p)
        res["values"] = [_value_json(evaluate(f, p)), _value_json(evaluate(g, p))]
    return res


def _value_json(v):
    return "-inf" if v is None else ser.rational_to_json(v)


def dispatch(command: str, problem: dict, params: dict, flags: argparse.Namespace) -> tuple[str, dict]:
    pl = problem["payload"]
    if command == "normalize":
        f, pair = ser.poly_from_json(pl["poly"]), ser.pair_from_json(pl["pair"])
        form = canonical_form(f, pair)
        res = {"canonical": ser.poly_to_json(form.poly), "pair": ser.pair_to_json(pair)}
        if flags.cells or flags.plot:
            res["cells"] = emit_cells(f, pair, plot=flags.plot)
        return "ok", res
    if command == "eval":
        f = ser.poly_from_json(pl["poly"])
        return "ok", {"value": _value_json(evaluate(f, ser.vector_from_json(pl["point"])))}
    if command in ("leq", "eq"):
        pair = ser.pair_from_json(pl["pair"])
        f, g = ser.poly_from_json(pl["f"], pair.dim), ser.poly_from_json(pl["g"], pair.dim)
        mode = flags.mode or "pointwise"
        if mode == "pointwise":
            return "ok", _pointwise(f, g, pair, both=(command == "eq"))
        op = syntactic_leq if command == "leq" else syntactic_eq
        ans = op(f, g, pair, params["bound"])
        res = _order_result(ans, mode)
        if ans.status == Answer.UNDETERMINED:
            return "undetermined", {**res, "exhausted": {"bound": params["bound"]}}
        return "ok", res
    if command == "closure":
        if "ideal" in pl:
            I = ser.ideal_from_json(pl["ideal"])
            J = integral_closure(I)
            added = [list(g) for g in J.gens if g not in I.gens]
            res = {"closure": ser.ideal_to_json(J), "added": added}
            if flags.m_max is not None or "m_max" in problem.get("parameters", {}):
                res["oracle"] = [{"gen": list(g), "m": dependence_oracle(g, I, params["m_max"])} for g in J.gens]
                if any(r["m"] is None for r in res["oracle"]):
                    return "undetermined", {**res, "exhausted": {"m_max": params["m_max"]}}
            return "ok", res
        pair = ser.pair_from_json(pl["pair"])
        f = ser.poly_from_json(pl["poly"], pair.dim)
        ans = is_integrally_closed_elt(f, pair, params["radius"], params["bound"])
        res = {"integrally_closed": ans.status.value, "complete_up_to": {"radius": params["radius"]},
               "candidates_checked": ans.checked}
        if ans.witness is not None:
            res["witness"] = ser.monomial_to_json(ans.witness)
            res["evidence"] = ser.to_jsonable(ans.evidence)
        if ans.status == Answer.UNDETERMINED:
            return "undetermined", {**res, "exhausted": {"bound": params["bound"]}}
        return "ok", res
    if command == "integral-over":
        pair = ser.pair_from_json(pl["pair"])
        x, y = ser.poly_from_json(pl["x"], pair.dim), ser.poly_from_json(pl["y"], pair.dim)
        n_max = params["n_max"] or 4
        res = integral_over(x, y, pair, n_max, params["bound"])
        if isinstance(res, DependenceWitness):
            return "ok", {"found": True, "n": res.n, "lhs": ser.poly_to_json(res.lhs),
                          "rhs": ser.poly_to_json(res.rhs), "certificate": ser.to_jsonable(res.certificate)}
        out = {"found": False, "n_max": n_max, "refutation": ser.to_jsonable(res.refutation)}
        if not pointwise_eq(join(x, y), y, pair.delta):
            # a witness at any n would force ev(x v y) == ev(y)
            p = pointwise_counterexample(x, y, pair.delta)
            return "ok", {**out, "integral": False, "distinguishing_point": ser.vector_to_json(p)}
        exhausted = {"n_max": n_max, "bound": params["bound"]} if res.undetermined else {"n_max": n_max}
        return "undetermined", {**out, "exhausted": exhausted}
    if command == "reduction":
        I = ser.ideal_from_json(pl["I"])
        J = ser.ideal_from_json(pl["J"]) if "J" in pl else integral_closure(I)
        n_max = 10 if params["n_max"] is None else params["n_max"]
        try:
            n = reduction_number(I, J, n_max)
        except ValueError as e:
            raise InputError(str(e)) from None
        res = {"I": ser.ideal_to_json(I), "J": ser.ideal_to_json(J), "n": n}
        if n is None:
            return "undetermined", {**res, "exhausted": {"n_max": n_max}}
        return "ok", res
    if command == "saturate":
        m = ser.monoid_from_json(pl["monoid"])
        r = saturate(m)
        return "ok", {
            "saturated": r.saturated,
            "complete_up_to": {"degree_bound": r.degree_bound},
            "new_points": [list(v) for v in r.new_points],
            "generators": [list(v) for v in r.gens + r.new_points],
        }
    if command == "proptest":
        report = run_suite(pl["suite"], params["seed"], params["cases"])
        status = "ok" if not report.failures and not report.undetermined else "error"
        if not report.failures and report.undetermined:
            status = "undetermined"
        return status, report.to_json()
    raise InputError(f"unknown command {command!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropnorm", description="Exact normalization of tropical polynomials and monomial ideals.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="problem file ('-' for stdin); for proptest, a suite name or a problem file")
    p.add_argument("--mode", choices=("syntactic", "pointwise"))
    p.add_argument("--radius", type=int)
    p.add_argument("--bound", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--m-max", dest="m_max", type=int)
    p.add_argument("--cells", action="store_true", help="emit linearity cells with normalize")
    p.add_argument("--plot", action="store_true", help="add polygon vertices to cells (dim <= 2)")
    p.add_argument("--seed", type=int)
    p.add_argument("--cases", type=int)
    p.add_argument("--output", choices=("json", "pretty"), default="json")
    p.add_argument("--timing", action="store_true", help="include wall time in the envelope")
    return p


def _read_problem(args) -> dict:
    if args.command == "proptest" and args.input in SUITES:
        return {"kind": "proptest", "payload": {"suite": args.input}}
    if args.input == "-":
        text, source = sys.stdin.read(), "<stdin>"
    else:
        path = Path(args.input)
        if not path.exists():
            raise InputError(f"{args.input}: no such file" + (
                f" (known suites: {', '.join(SUITES)})" if args.command == "proptest" else ""))
        text, source = path.read_text(), str(path)
    return load_problem(text, args.command, source)


def _params(problem: dict, args) -> dict:
    params = dict(DEFAULTS)
    params.update(problem.get("parameters", {}))
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            params[k] = v
    for k in ("bound", "m_max", "cases"):
        if params[k] < 1:
            raise InputError(f"--{k.replace('_', '-')} must be positive")
    return params


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        problem = _read_problem(args)
        params = _params(problem, args)
        status, result = dispatch(args.command, problem, params, args)
    except (InputError, ValueError, KeyError, TypeError) as e:
        status, result = "error", {"message": str(e)}
    envelope = {"command": args.command, "status": status, "result": result}
    if args.timing:
        envelope["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    if args.output == "pretty":
        stdout.write(render_pretty(envelope))
    else:
        stdout.write(json.dumps(envelope, sort_keys=True) + "\n")
    return EXIT[status]


def render_pretty(envelope: dict) -> str:
    lines = [f"{envelope['command']}: {envelope['status']}"]
    res = envelope["result"]
    for key, val in res.items():
        if isinstance(val, dict) and "terms" in val:
            val = str(ser.poly_from_json(val))
        elif isinstance(val, dict) and "gens" in val:
            val = str(ser.ideal_from_json(val))
        elif isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        lines.append(f"  {key}: {val}")
    if "timing_ms" in envelope:
        lines.append(f"  timing: {envelope['timing_ms']} ms")
    return "\n".join(lines) + "\n"


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
