import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import solve_square
from tropnorm.geometry import (
    HalfSpace,
    HPolytope,
    LPProblem,
    LPStatus,
    dot,
    hull_membership,
    lp_solve,
    min_convex_pl,
    validate_polytope,
    verify_lp_result,
)

F = Fraction


def test_lp_vertex_optimum():
    prob = LPProblem((1,), "max", [((1,), 1), ((-1,), 0)])
    res = lp_solve(prob)
    assert res.status == LPStatus.OPTIMAL
    assert res.value == 1 and res.witness_point == (1,)
    assert verify_lp_result(prob, res)


def test_lp_infeasible_has_farkas_certificate():
    prob = LPProblem((1,), "max", [((1,), -1), ((-1,), 0)])
    res = lp_solve(prob)
    assert res.status == LPStatus.INFEASIBLE
    assert verify_lp_result(prob, res)


def test_lp_simplex_face():
    prob = LPProblem((1, 1), "max", [((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)])
    res = lp_solve(prob)
    assert res.status == LPStatus.OPTIMAL and res.value == 1
    assert verify_lp_result(prob, res)


def test_lp_unbounded_and_equalities():
    res = lp_solve(LPProblem((1, 0), "max", [((-1, 0), 0)]))
    assert res.status == LPStatus.UNBOUNDED
    prob = LPProblem((1, 2), "min", [((-1, 0), 0), ((0, -1), 0)], [((1, 1), F(3, 2))])
    res = lp_solve(prob)
    assert res.status == LPStatus.OPTIMAL and res.value == F(3, 2)
    assert verify_lp_result(prob, res)


def test_lp_dimension_mismatch():
    with pytest.raises(ValueError):
        LPProblem((1, 1), "max", [((1,), 1)])


def test_lp_degenerate_cycling_example():
    # Beale's classic cycling LP; Bland's rule must terminate
    rows = [
        ((F(1, 4), -8, -1, 9), 0),
        ((F(1, 2), -12, F(-1, 2), 3), 0),
        ((0, 0, 1, 0), 1),
        ((-1, 0, 0, 0), 0), ((0, -1, 0, 0), 0), ((0, 0, -1, 0), 0), ((0, 0, 0, -1), 0),
    ]
    prob = LPProblem((F(3, 4), -20, F(1, 2), -6), "max", rows)
    res = lp_solve(prob)
    assert res.status == LPStatus.OPTIMAL and res.value == F(5, 4)
    assert verify_lp_result(prob, res)


def brute_force(prob):
    best = None
    for sub in itertools.combinations(prob.constraints, prob.dim):
        x = solve_square([a for a, _ in sub], [b for _, b in sub])
        if x is None or not all(dot(a, x) <= b for a, b in prob.constraints):
            continue
        v = dot(prob.objective, x)
        if best is None or (v > best if prob.sense == "max" else v < best):
            best = v
    return best


rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def bounded_lps(draw):
    n = draw(st.integers(1, 3))
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), draw(st.integers(0, 4))))
        e[i] = -1
        rows.append((tuple(e), draw(st.integers(0, 4))))
    for _ in range(draw(st.integers(0, 8 - 2 * n))):
        a = tuple(draw(st.integers(-3, 3)) for _ in range(n))
        if any(a):
            rows.append((a, draw(rationals)))
    c = tuple(draw(st.integers(-3, 3)) for _ in range(n))
    return LPProblem(c, draw(st.sampled_from(["max", "min"])), tuple(rows))


@settings(max_examples=150, deadline=None)
@given(bounded_lps())
def test_lp_matches_vertex_enumeration(prob):
    res = lp_solve(prob)
    best = brute_force(prob)
    if best is None:
        assert res.status == LPStatus.INFEASIBLE
    else:
        assert res.status == LPStatus.OPTIMAL and res.value == best
    assert verify_lp_result(prob, res)


@settings(max_examples=100, deadline=None)
@given(bounded_lps())
def test_strong_duality(prob):
    res = lp_solve(prob)
    if res.status == LPStatus.OPTIMAL:
        y, z = res.certificate
        dual = dot(y, [b for _, b in prob.constraints]) + dot(z, [f for _, f in prob.equalities])
        assert dual == (res.value if prob.sense == "max" else -res.value)


def test_halfspace_is_made_primitive():
    h = HalfSpace((2, -4), F(3))
    assert h.normal == (1, -2) and h.bound == F(3, 2)
    with pytest.raises(ValueError):
        HalfSpace((0, 0), 1)


@pytest.mark.parametrize(
    "poly, expected",
    [
        (HPolytope.box([0], [1]), (True, True, True)),
        (HPolytope(1, [((-1,), 0)]), (True, False, True)),
        (HPolytope(1, [((1,), 0), ((-1,), 0)]), (True, True, False)),
        (HPolytope(1, [((1,), -1), ((-1,), 0)]), (False, False, False)),
    ],
)
def test_validate_polytope(poly, expected):
    r = validate_polytope(poly)
    assert (r.nonempty, r.bounded, r.full_dim) == expected


def test_min_convex_pl_examples():
    assert min_convex_pl([((0,), 0), ((2,), 0)], HPolytope.box([0], [1])) == (0, (0,))
    assert min_convex_pl([((1,), 0), ((-1,), 0)], HPolytope.box([-1], [1])) == (0, (0,))
    assert min_convex_pl([((1,), 0)], HPolytope.box([F(1, 3)], [2])) == (F(1, 3), (F(1, 3),))


def test_min_convex_pl_errors():
    with pytest.raises(ValueError):
        min_convex_pl([((1,), 0)], HPolytope(1, [((1,), -1), ((-1,), 0)]))
    with pytest.raises(ValueError):
        min_convex_pl([((1,), 0)], HPolytope(1, [((-1,), 0)]))
    with pytest.raises(ValueError):
        min_convex_pl([], HPolytope.box([0], [1]))


def arrangement_min(terms, box_lo, box_hi):
    """Brute force: the minimum sits on a vertex of facets plus pairwise tie hyperplanes."""
    n = len(box_lo)
    hyper = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        hyper += [(tuple(e), box_hi[i]), (tuple(e), box_lo[i])]
    for (k1, c1), (k2, c2) in itertools.combinations(terms, 2):
        d = tuple(a - b for a, b in zip(k1, k2))
        if any(d):
            hyper.append((d, c2 - c1))
    best = None
    for sub in itertools.combinations(hyper, n):
        x = solve_square([a for a, _ in sub], [b for _, b in sub])
        if x is None or not all(lo <= v <= hi for v, lo, hi in zip(x, box_lo, box_hi)):
            continue
        v = max(dot(k, x) + c for k, c in terms)
        best = v if best is None else min(best, v)
    return best


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.tuples(*[st.integers(-3, 3)] * n), rationals), min_size=1, max_size=4),
    st.tuples(*[st.integers(-2, 0)] * n),
)))
def test_min_convex_pl_matches_arrangement_oracle(data):
    n, terms, lo = data
    hi = tuple(v + 2 for v in lo)
    value, point = min_convex_pl(terms, HPolytope.box(lo, hi))
    assert value == arrangement_min(terms, lo, hi)
    assert max(dot(k, point) + c for k, c in terms) == value


def test_hull_membership_examples():
    rays = [(1, 0), (0, 1)]
    assert hull_membership((1, 1), [(2, 0), (0, 2)], rays)
    assert not hull_membership((0, 0), [(2, 0), (0, 2)], rays)
    assert hull_membership((5, 0), [(2, 0)], [(1, 0)])
    with pytest.raises(ValueError):
        hull_membership((1, 1), [], rays)


@settings(max_examples=50, deadline=None)
@given(
    st.tuples(st.integers(0, 4), st.integers(0, 4)),
    st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=4),
    st.tuples(st.integers(0, 4), st.integers(0, 4)),
)
def test_hull_membership_monotone(v, pts, extra):
    before = hull_membership(v, pts, [(1, 0)])
    if before:
        assert hull_membership(v, pts + [extra], [(1, 0)])
        assert hull_membership(v, pts, [(1, 0), (0, 1)])
