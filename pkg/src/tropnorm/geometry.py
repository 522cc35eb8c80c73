"""Exact rational geometry: H-polytopes and a certified simplex solver.

All arithmetic is done with :class:`fractions.Fraction`; nothing in this
module ever touches a float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence

Rational = Fraction
QVector = tuple  # tuple[Fraction, ...]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction; refuse floats."""
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}")
    return x if isinstance(x, Fraction) else Fraction(x)


def qvec(xs) -> tuple:
    return tuple(as_rational(x) for x in xs)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def primitive(normal: Sequence[int], bound) -> tuple[tuple[int, ...], Fraction]:
    """Divide an integer normal by the gcd of its entries, scaling the bound."""
    normal = tuple(int(v) for v in normal)
    g = math.gcd(*normal)
    if g == 0:
        raise ValueError("halfspace normal must be nonzero")
    return tuple(v // g for v in normal), as_rational(bound) / g


@dataclass(frozen=True)
class HalfSpace:
    """``normal . p <= bound`` with a primitive integer normal."""

    normal: tuple[int, ...]
    bound: Fraction

    def __post_init__(self):
        normal, bound = primitive(self.normal, self.bound)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "bound", bound)

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, p) -> bool:
        return dot(self.normal, p) <= self.bound


@dataclass(frozen=True)
class PolytopeReport:
    nonempty: bool
    bounded: bool
    full_dim: bool


@dataclass(frozen=True)
class HPolytope:
    dim: int
    halfspaces: tuple[HalfSpace, ...]

    def __post_init__(self):
        hs = tuple(h if isinstance(h, HalfSpace) else HalfSpace(*h) for h in self.halfspaces)
        for h in hs:
            if h.dim != self.dim:
                raise ValueError(f"halfspace of dimension {h.dim} in a {self.dim}-dimensional polytope")
        object.__setattr__(self, "halfspaces", hs)

    @classmethod
    def box(cls, lower, upper) -> "HPolytope":
        n = len(lower)
        hs = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            hs.append(HalfSpace(tuple(e), as_rational(upper[i])))
            e[i] = -1
            hs.append(HalfSpace(tuple(e), -as_rational(lower[i])))
        return cls(n, tuple(hs))

    def contains(self, p) -> bool:
        return all(h.contains(p) for h in self.halfspaces)

    def rows(self):
        return [(tuple(Fraction(v) for v in h.normal), h.bound) for h in self.halfspaces]

    @cached_property
    def report(self) -> PolytopeReport:
        return validate_polytope(self)

    @cached_property
    def bounding_box(self) -> tuple[tuple, tuple]:
        """Coordinatewise (min, max) corners; requires a nonempty bounded polytope."""
        self.require(bounded=True)
        lo, hi = [], []
        for i in range(self.dim):
            e = tuple(Fraction(int(j == i)) for j in range(self.dim))
            lo.append(lp_solve(LPProblem(e, "min", self.rows())).value)
            hi.append(lp_solve(LPProblem(e, "max", self.rows())).value)
        return tuple(lo), tuple(hi)

    @cached_property
    def interior_point(self) -> tuple:
        """A point maximizing the uniform slack of every constraint."""
        self.require(bounded=True)
        return _slack_lp(self).witness_point[:-1]

    def require(self, bounded: bool = True, full_dim: bool = False) -> None:
        r = self.report
        if not r.nonempty:
            raise ValueError("polytope is empty")
        if bounded and not r.bounded:
            raise ValueError("polytope is unbounded")
        if full_dim and not r.full_dim:
            raise ValueError("polytope is not full-dimensional")


class LPStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPProblem:
    """Optimize ``objective . x`` subject to ``a . x <= b`` and ``e . x == f``.

    Variables are free. Rows may have arbitrary rational coefficients; rows
    built from :class:`HalfSpace` objects are accepted as well.
    """

    objective: tuple
    sense: str = "max"
    constraints: tuple = ()
    equalities: tuple = ()

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        n = len(self.objective)
        object.__setattr__(self, "objective", qvec(self.objective))
        cons, eqs = [], []
        for rows, out in ((self.constraints, cons), (self.equalities, eqs)):
            for row in rows:
                if isinstance(row, HalfSpace):
                    row = (row.normal, row.bound)
                a, b = row
                if len(a) != n:
                    raise ValueError(f"row of length {len(a)} in an LP with {n} variables")
                out.append((qvec(a), as_rational(b)))
        object.__setattr__(self, "constraints", tuple(cons))
        object.__setattr__(self, "equalities", tuple(eqs))

    @property
    def dim(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp_solve`.

    ``certificate`` is ``(y, z)``: multipliers for the inequality rows
    (``y >= 0``) and the equality rows (``z`` free). For an optimal result
    ``A^T y + E^T z`` equals the (max-sense) objective and ``b.y + f.z``
    equals the max-sense optimum. For an infeasible result ``A^T y + E^T z = 0``
    and ``b.y + f.z < 0`` (Farkas).
    """

    status: LPStatus
    value: Fraction | None = None
    witness_point: tuple | None = None
    certificate: tuple | None = None


def _pivot(T, r, c):
    row = T[r]
    p = row[c]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]


def _reduced_costs(T, basis, cost):
    # last tableau column is the rhs
    ncols = len(T[0]) - 1
    d = list(cost[:ncols])
    for i, bv in enumerate(basis):
        cb = cost[bv]
        if cb:
            for j, v in enumerate(T[i][:ncols]):
                if v:
                    d[j] -= cb * v
    return d


def _simplex(T, basis, cost, allowed):
    """Minimize ``cost`` over the tableau with Bland's rule.

    Returns ``None`` on optimality or the entering column of an unbounded ray.
    """
    while True:
        d = _reduced_costs(T, basis, cost)
        enter = next((j for j in allowed if d[j] < 0), None)
        if enter is None:
            return None
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return enter
        _pivot(T, best[1], enter)
        basis[best[1]] = enter


def _solve_standard(M, rhs, cost):
    """Solve ``min cost.y`` s.t. ``M y = rhs, y >= 0`` exactly.

    Returns ``(status, y, multipliers, ray)`` where ``multipliers`` are the
    simplex multipliers ``pi`` (with ``M^T pi <= cost`` at optimality).
    """
    m = len(M)
    k = len(M[0]) if m else len(cost)
    signs = [(-1 if r < 0 else 1) for r in rhs]
    T = []
    for i in range(m):
        s = signs[i]
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append([s * v for v in M[i]] + art + [s * rhs[i]])
    basis = [k + i for i in range(m)]
    phase1 = [Fraction(0)] * k + [Fraction(1)] * m
    _simplex(T, basis, phase1 + [Fraction(0)], range(k + m))
    if any(T[i][-1] != 0 for i in range(m) if basis[i] >= k):
        return "infeasible", None, None, None
    for i in range(m):
        if basis[i] >= k:
            j = next((j for j in range(k) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, i, j)
                basis[i] = j
    full_cost = list(cost) + [Fraction(0)] * m
    enter = _simplex(T, basis, full_cost + [Fraction(0)], range(k))
    y = [Fraction(0)] * k
    for i, bv in enumerate(basis):
        if bv < k:
            y[bv] = T[i][-1]
    if enter is not None:
        ray = [Fraction(0)] * k
        ray[enter] = Fraction(1)
        for i, bv in enumerate(basis):
            if bv < k:
                ray[bv] = -T[i][enter]
        return "unbounded", y, None, ray
    pi_signed = [sum((full_cost[bv] * T[r][k + i] for r, bv in enumerate(basis)), Fraction(0)) for i in range(m)]
    pi = [s * v for s, v in zip(signs, pi_signed)]
    return "optimal", y, pi, None


def _split_dual(vec, m_ineq, q_eq):
    y = tuple(vec[:m_ineq])
    z = tuple(vec[m_ineq + i] - vec[m_ineq + q_eq + i] for i in range(q_eq))
    return y, z


def lp_solve(problem: LPProblem) -> LPResult:
    """Solve an LP exactly, returning a primal witness and a dual certificate.

    The dual ``min b.y + f.z  s.t.  A^T y + E^T z = c, y >= 0`` is solved in
    standard form (one row per primal variable); the primal point is read
    off the simplex multipliers.
    """
    n = problem.dim
    c = problem.objective if problem.sense == "max" else tuple(-v for v in problem.objective)
    A = problem.constraints
    E = problem.equalities
    m_ineq, q_eq = len(A), len(E)
    cols = [a for a, _ in A] + [e for e, _ in E] + [tuple(-v for v in e) for e, _ in E]
    cost = [b for _, b in A] + [f for _, f in E] + [-f for _, f in E]
    if not cols:
        if any(c):
            return LPResult(LPStatus.UNBOUNDED, witness_point=tuple(Fraction(0) for _ in range(n)))
        return LPResult(LPStatus.OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(n)), ((), ()))
    M = [[col[i] for col in cols] for i in range(n)]

    def sign_value(v):
        return v if problem.sense == "max" else -v

    status, y, pi, ray = _solve_standard(M, list(c), cost)
    if status == "optimal":
        x = tuple(pi)
        yy, zz = _split_dual(y, m_ineq, q_eq)
        value = dot(c, x)
        return LPResult(LPStatus.OPTIMAL, sign_value(value), x, (yy, zz))
    if status == "unbounded":
        return LPResult(LPStatus.INFEASIBLE, certificate=_split_dual(ray, m_ineq, q_eq))
    # dual infeasible: the primal is either infeasible or unbounded
    status, y, pi, ray = _solve_standard(M, [Fraction(0)] * n, cost)
    if status == "unbounded":
        return LPResult(LPStatus.INFEASIBLE, certificate=_split_dual(ray, m_ineq, q_eq))
    return LPResult(LPStatus.UNBOUNDED, witness_point=tuple(pi))


def verify_lp_result(problem: LPProblem, result: LPResult) -> bool:
    """Check a result's witness and certificate by direct exact arithmetic."""
    n = problem.dim
    c = problem.objective if problem.sense == "max" else tuple(-v for v in problem.objective)
    A, E = problem.constraints, problem.equalities
    if result.status == LPStatus.UNBOUNDED:
        x = result.witness_point
        return all(dot(a, x) <= b for a, b in A) and all(dot(e, x) == f for e, f in E)
    y, z = result.certificate
    if any(v < 0 for v in y) or len(y) != len(A) or len(z) != len(E):
        return False
    combo = [sum((y[i] * A[i][0][j] for i in range(len(A))), Fraction(0))
             + sum((z[i] * E[i][0][j] for i in range(len(E))), Fraction(0)) for j in range(n)]
    dual_value = dot(y, [b for _, b in A]) + dot(z, [f for _, f in E])
    if result.status == LPStatus.INFEASIBLE:
        return all(v == 0 for v in combo) and dual_value < 0
    x = result.witness_point
    primal_ok = all(dot(a, x) <= b for a, b in A) and all(dot(e, x) == f for e, f in E)
    max_value = result.value if problem.sense == "max" else -result.value
    return primal_ok and list(combo) == list(c) and dual_value == max_value == dot(c, x)


def _slack_lp(poly: HPolytope) -> LPResult:
    # maximize s subject to a.p + s <= b, s <= 1
    rows = [(a + (Fraction(1),), b) for a, b in poly.rows()]
    rows.append((tuple(Fraction(0) for _ in range(poly.dim)) + (Fraction(1),), Fraction(1)))
    obj = tuple(Fraction(0) for _ in range(poly.dim)) + (Fraction(1),)
    return lp_solve(LPProblem(obj, "max", rows))


def validate_polytope(p: HPolytope) -> PolytopeReport:
    rows = p.rows()
    zero = tuple(Fraction(0) for _ in range(p.dim))
    feas = lp_solve(LPProblem(zero, "max", rows))
    if feas.status == LPStatus.INFEASIBLE:
        return PolytopeReport(False, False, False)
    bounded = True
    for i in range(p.dim):
        e = tuple(Fraction(int(j == i)) for j in range(p.dim))
        for sense in ("max", "min"):
            if lp_solve(LPProblem(e, sense, rows)).status == LPStatus.UNBOUNDED:
                bounded = False
    full_dim = _slack_lp(p).value > 0
    return PolytopeReport(True, bounded, full_dim)


def min_convex_pl(terms, delta: HPolytope) -> tuple[Fraction, tuple]:
    """Minimize ``p -> max_j (slope_j . p + coeff_j)`` over a bounded polytope.

    Epigraph form: minimize ``t`` subject to ``slope_j . p - t <= -coeff_j``.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("min_convex_pl needs at least one term")
    delta.require(bounded=True)
    n = delta.dim
    rows = [(a + (Fraction(0),), b) for a, b in delta.rows()]
    for slope, coeff in terms:
        if len(slope) != n:
            raise ValueError("term slope dimension does not match the polytope")
        rows.append((qvec(slope) + (Fraction(-1),), -as_rational(coeff)))
    obj = tuple(Fraction(0) for _ in range(n)) + (Fraction(1),)
    res = lp_solve(LPProblem(obj, "min", rows))
    if res.status != LPStatus.OPTIMAL:
        raise ArithmeticError(f"epigraph LP unexpectedly {res.status.value}")
    return res.value, res.witness_point[:n]


def hull_lp(v, points, rays=()) -> LPResult:
    """Feasibility LP for ``v in conv(points) + cone(rays)``.

    Variables are the convex weights followed by the ray weights. An
    infeasible result's equality multipliers ``z = (w, w0)`` give a
    separating hyperplane: ``w . x + w0 >= 0`` on the hull, ``w . v + w0 < 0``.
    """
    points = [qvec(p) for p in points]
    rays = [qvec(r) for r in rays]
    if not points:
        raise ValueError("hull_membership needs at least one point")
    v = qvec(v)
    n = len(v)
    if any(len(p) != n for p in points + rays):
        raise ValueError("dimension mismatch in hull_membership")
    k = len(points) + len(rays)
    gens = points + rays
    zero = tuple(Fraction(0) for _ in range(k))
    cons = []
    for j in range(k):
        row = [Fraction(0)] * k
        row[j] = Fraction(-1)
        cons.append((tuple(row), Fraction(0)))
    eqs = [(tuple(g[i] for g in gens), v[i]) for i in range(n)]
    eqs.append((tuple(Fraction(int(j < len(points))) for j in range(k)), Fraction(1)))
    return lp_solve(LPProblem(zero, "max", cons, eqs))


def hull_membership(v, points, rays=()) -> bool:
    """Is ``v`` in ``conv(points) + cone(rays)``?"""
    return hull_lp(v, points, rays).status == LPStatus.OPTIMAL


__all__ = [
    "HalfSpace", "HPolytope", "LPProblem", "LPResult", "LPStatus", "PolytopeReport",
    "as_rational", "dot", "hull_lp", "hull_membership", "lp_solve", "min_convex_pl", "primitive",
    "qvec", "validate_polytope", "verify_lp_result",
]
