import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import grid
from tropnorm import serialize as ser
from tropnorm.cli import run
from tropnorm.semiring import MonoidPair, evaluate

UNIT = {"dim": 1, "constraints": [{"F": [1], "lambda": "1"}, {"F": [-1], "lambda": "0"}]}
SYM = {"dim": 1, "constraints": [{"F": [1], "lambda": "1"}, {"F": [-1], "lambda": "1"}]}


def p1(*slopes):
    return {"terms": [{"slope": [k], "coeff": "0"} for k in slopes]}


def invoke(tmp_path, kind, payload, *flags, parameters=None):
    doc = {"kind": kind, "payload": payload}
    if parameters:
        doc["parameters"] = parameters
    path = tmp_path / f"{kind}.json"
    path.write_text(json.dumps(doc))
    out = io.StringIO()
    code = run([kind, str(path), *flags], stdout=out)
    return code, out.getvalue()


def result(tmp_path, kind, payload, *flags, **kw):
    code, text = invoke(tmp_path, kind, payload, *flags, **kw)
    return code, json.loads(text)


def terms(env):
    return {(tuple(t["slope"]), t["coeff"]) for t in env["result"]["canonical"]["terms"]}


def test_normalize(tmp_path):
    code, env = result(tmp_path, "normalize", {"poly": p1(0, 1, 2), "pair": SYM})
    assert code == 0 and env["status"] == "ok"
    assert terms(env) == {((0,), "0"), ((2,), "0")}
    code, env = result(tmp_path, "normalize", {"poly": p1(0, 1, 2), "pair": UNIT})
    assert terms(env) == {((2,), "0")}


def test_eval(tmp_path):
    code, env = result(tmp_path, "eval", {"poly": p1(0, 2), "point": ["1/2"]})
    assert code == 0 and env["result"]["value"] == "1"
    code, env = result(tmp_path, "eval", {"poly": {"terms": [], "dim": 1}, "point": ["0"]})
    assert env["result"]["value"] == "-inf"


def test_eq_modes(tmp_path):
    lhs = {"terms": [{"slope": [k], "coeff": "0"} for k in (0, 1, 2, 3)]}
    code, env = result(tmp_path, "eq", {"f": lhs, "g": lhs, "pair": UNIT}, "--mode", "syntactic")
    assert code == 0 and env["result"]["answer"] == "yes"
    code, env = result(tmp_path, "eq", {"f": p1(0, 1), "g": p1(0, 2), "pair": UNIT})
    assert env["result"]["answer"] == "no"
    assert env["result"]["distinguishing_point"] == ["1"]
    code, env = result(tmp_path, "leq", {"f": p1(1), "g": p1(0, 2), "pair": UNIT}, "--mode", "syntactic")
    assert env["result"]["answer"] == "yes"


def test_syntactic_undetermined_exit_code(tmp_path):
    payload = {"f": p1(0), "g": p1(5), "pair": UNIT}
    code, env = result(tmp_path, "leq", payload, "--mode", "syntactic", "--bound", "2")
    assert code == 2 and env["status"] == "undetermined"
    assert env["result"]["exhausted"] == {"bound": 2}


def test_closure(tmp_path):
    code, env = result(tmp_path, "closure", {"ideal": {"dim": 2, "gens": [[3, 0], [0, 3]]}}, "--m-max", "8")
    assert code == 0
    assert env["result"]["closure"]["gens"] == [[3, 0], [2, 1], [1, 2], [0, 3]]
    assert sorted(env["result"]["added"]) == [[1, 2], [2, 1]]
    assert {tuple(r["gen"]): r["m"] for r in env["result"]["oracle"]}[(2, 1)] == 3
    code, env = result(tmp_path, "closure", {"poly": p1(0, 1, 2), "pair": UNIT})
    assert code == 0 and env["result"]["integrally_closed"] == "yes"


def test_integral_over(tmp_path):
    code, env = result(tmp_path, "integral-over", {"x": p1(1), "y": p1(0, 2), "pair": UNIT})
    assert code == 0 and env["result"]["found"] and env["result"]["n"] == 1
    code, env = result(tmp_path, "integral-over", {"x": p1(0, 2), "y": p1(0, 1), "pair": UNIT})
    assert code == 0 and env["result"]["integral"] is False


def test_reduction(tmp_path):
    code, env = result(tmp_path, "reduction", {"I": {"dim": 2, "gens": [[2, 0], [0, 2]]},
                                               "J": {"dim": 2, "gens": [[2, 0], [1, 1], [0, 2]]}})
    assert code == 0 and env["result"]["n"] == 1
    code, env = result(tmp_path, "reduction", {"I": {"dim": 2, "gens": [[1, 1]]}, "J": {"dim": 2, "gens": [[2, 2]]}})
    assert code == 1 and env["status"] == "error"


def test_saturate(tmp_path):
    code, env = result(tmp_path, "saturate", {"monoid": {"gens": [[2, 0], [0, 1], [1, 1]], "degree_bound": 3}})
    assert code == 0 and not env["result"]["saturated"]
    assert [1, 0] in env["result"]["new_points"]


def test_proptest_by_suite_name():
    out = io.StringIO()
    code = run(["proptest", "lp-oracle", "--cases", "20", "--seed", "3"], stdout=out)
    env = json.loads(out.getvalue())
    assert code == 0 and env["result"]["failures"] == [] and env["result"]["cases"] == 20
    code = run(["proptest", "no-such-suite"], stdout=io.StringIO())
    assert code == 1


def test_output_is_deterministic(tmp_path):
    outs = {invoke(tmp_path, "normalize", {"poly": p1(0, 1, 2), "pair": SYM}, "--cells")[1] for _ in range(3)}
    assert len(outs) == 1
    a, b = io.StringIO(), io.StringIO()
    run(["proptest", "semiring-laws", "--cases", "10"], stdout=a)
    run(["proptest", "semiring-laws", "--cases", "10"], stdout=b)
    assert a.getvalue() == b.getvalue()


def test_cells_cover_polytope(tmp_path):
    code, env = result(tmp_path, "normalize", {"poly": p1(0, 2), "pair": SYM}, "--cells", "--plot")
    cells = env["result"]["cells"]
    assert [c["slope"] for c in cells] == [[0], [2]]
    assert cells[0]["vertices"] == [["-1"], ["0"]] and cells[1]["vertices"] == [["0"], ["1"]]
    pair = MonoidPair.box([-1], [1])
    f = ser.poly_from_json(p1(0, 2))
    regions = [(ser.polytope_from_json(c["region"]), Fraction(c["coeff"]), tuple(c["slope"])) for c in cells]
    for p in grid([-1], [1], 10):
        owners = [(k, c) for r, c, k in regions if r.contains(p)]
        assert owners and all(k[0] * p[0] + c == evaluate(f, p) for k, c in owners)
    assert pair.delta.contains((0,))


def test_plot_vertices_2d(tmp_path):
    square = {"dim": 2, "constraints": [{"F": [1, 0], "lambda": "1"}, {"F": [-1, 0], "lambda": "0"},
                                        {"F": [0, 1], "lambda": "1"}, {"F": [0, -1], "lambda": "0"}]}
    f = {"terms": [{"slope": [2, 0], "coeff": "0"}, {"slope": [0, 2], "coeff": "0"}]}
    code, env = result(tmp_path, "normalize", {"poly": f, "pair": square}, "--plot")
    verts = [sorted(map(tuple, c["vertices"])) for c in env["result"]["cells"]]
    assert sorted(verts) == [[("0", "0"), ("0", "1"), ("1", "1")], [("0", "0"), ("1", "0"), ("1", "1")]]


def test_plot_rejects_high_dimension(tmp_path):
    cube = {"dim": 3, "constraints": [{"F": e, "lambda": "1"} for e in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
            + [{"F": [-1, -1, -1], "lambda": "0"}]}
    f = {"terms": [{"slope": [1, 0, 0], "coeff": "0"}]}
    code, env = result(tmp_path, "normalize", {"poly": f, "pair": cube}, "--plot")
    assert code == 1 and "--plot" in env["result"]["message"]
    code, env = result(tmp_path, "normalize", {"poly": f, "pair": cube}, "--cells")
    assert code == 0 and len(env["result"]["cells"]) == 1


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"kind": "eval", "payload": {"poly": {"terms": []}, "point": [0.5]}}', ":1:"),
        ('{"kind": "eval",\n "payload": }', ":2:"),
        ('{"kind": "eval", "payload": {"poly": {"terms": [{"slope": [1]}]}, "point": ["0"]}}', "$.payload.poly.terms[0]"),
        ('{"kind": "eq", "payload": {}}', "kind"),
    ],
)
def test_malformed_input_is_position_annotated(tmp_path, text, fragment):
    path = tmp_path / "bad.json"
    path.write_text(text)
    out = io.StringIO()
    code = run(["eval", str(path)], stdout=out)
    env = json.loads(out.getvalue())
    assert code == 1 and env["status"] == "error"
    assert fragment in env["result"]["message"]


def test_pretty_output(tmp_path):
    code, text = invoke(tmp_path, "normalize", {"poly": p1(0, 1, 2), "pair": SYM}, "--output", "pretty")
    assert text.splitlines()[0] == "normalize: ok"
    assert "canonical: 0 v 2X" in text


def test_parameters_block(tmp_path):
    code, env = result(tmp_path, "leq", {"f": p1(0), "g": p1(5), "pair": UNIT}, "--mode", "syntactic",
                       parameters={"bound": 2})
    assert code == 2
    code, env = result(tmp_path, "leq", {"f": p1(0), "g": p1(5), "pair": UNIT}, "--mode", "syntactic",
                       parameters={"bound": 2, "bogus": 1})
    assert code == 1


def test_console_entry_point(tmp_path):
    path = tmp_path / "e.json"
    path.write_text(json.dumps({"kind": "eval", "payload": {"poly": p1(0, 2), "point": ["1/2"]}}))
    proc = subprocess.run([sys.executable, "-m", "tropnorm", "eval", str(path)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["value"] == "1"
