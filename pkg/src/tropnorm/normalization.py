"""Normalization of tropical polynomials on a bounded rational polytope.

Two polynomials are identified when they evaluate to the same convex
piecewise-affine function on the polytope. The canonical representative
keeps exactly the slopes that are strictly maximal on some open subset of
the polytope, each with its saturated (tangent) coefficient.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .geometry import HPolytope, LPProblem, LPStatus, hull_membership, lp_solve, min_convex_pl
from .semiring import (
    AffineMonomial,
    Answer,
    MonoidPair,
    OrderAnswer,
    TropPoly,
    join,
    plus,
    scale,
    syntactic_leq,
)

GRID_STEPS = 4


def prune_dominated(f: TropPoly) -> TropPoly:
    """Drop terms lying below the midpoint of two other terms.

    If ``2k = k_a + k_b`` and ``2c <= c_a + c_b`` the term ``(k, c)`` never
    exceeds ``max`` of the other two, so the function is unchanged. Among
    the maximizers at any point the lexicographically largest slope always
    survives, so the whole flagged set can be dropped at once.
    """
    if len(f.terms) < 3:
        return f
    coeffs = f.as_dict
    keep = []
    for t in f.terms:
        dominated = False
        for k_a, c_a in coeffs.items():
            if k_a == t.slope:
                continue
            k_b = tuple(2 * x - y for x, y in zip(t.slope, k_a))
            c_b = coeffs.get(k_b)
            if c_b is not None and c_a + c_b >= 2 * t.coeff:
                dominated = True
                break
        if not dominated:
            keep.append(t)
    return TropPoly(f.dim, tuple(keep))


def _shifted(g: TropPoly, t: AffineMonomial):
    return [(tuple(a - b for a, b in zip(u.slope, t.slope)), u.coeff - t.coeff) for u in g.terms]


def pointwise_counterexample(f: TropPoly, g: TropPoly, delta: HPolytope):
    """A point of delta where ``ev f > ev g``, or None if ``ev f <= ev g`` throughout."""
    if f.dim != g.dim or f.dim != delta.dim:
        raise ValueError("dimension mismatch")
    delta.require(bounded=True)
    if f.is_neg_inf():
        return None
    if g.is_neg_inf():
        return delta.interior_point
    f, g = prune_dominated(f), prune_dominated(g)
    g_dict = g.as_dict
    for t in f.terms:
        if g_dict.get(t.slope, t.coeff - 1) >= t.coeff:
            continue
        value, p = min_convex_pl(_shifted(g, t), delta)
        if value < 0:
            return p
    return None


def pointwise_leq(f: TropPoly, g: TropPoly, delta: HPolytope) -> bool:
    """``ev f <= ev g`` everywhere on ``delta``, decided by one LP per term of f."""
    return pointwise_counterexample(f, g, delta) is None


def pointwise_eq(f: TropPoly, g: TropPoly, delta: HPolytope) -> bool:
    return pointwise_leq(f, g, delta) and pointwise_leq(g, f, delta)


def saturate_coeff(f: TropPoly, k, delta: HPolytope) -> Fraction:
    """Largest ``q`` with ``k . p + q <= ev f`` on ``delta``."""
    if f.is_neg_inf():
        raise ValueError("the empty polynomial has no minorant")
    k = tuple(int(v) for v in k)
    if len(k) != f.dim or f.dim != delta.dim:
        raise ValueError("dimension mismatch")
    value, _ = min_convex_pl(_shifted(prune_dominated(f), AffineMonomial(k, 0)), delta)
    return value


def _grid_points(delta: HPolytope):
    lo, hi = delta.bounding_box
    axes = [[lo[i] + (hi[i] - lo[i]) * Fraction(j, GRID_STEPS) for j in range(GRID_STEPS + 1)]
            for i in range(delta.dim)]
    pts = [p for p in itertools.product(*axes) if delta.contains(p)]
    pts.append(delta.interior_point)
    return pts


def _strict_winner(terms, p):
    best, second, arg = None, None, None
    for t in terms:
        v = t(p)
        if best is None or v > best:
            best, second, arg = v, best, t
        elif second is None or v > second:
            second = v
    if second is None or best > second:
        return arg
    return None


def _win_margin(t: AffineMonomial, rivals, delta: HPolytope):
    """maximize s with ``t - u >= s`` for every rival ``u`` on ``delta``, s <= 1."""
    n = delta.dim
    rows = [(a + (Fraction(0),), b) for a, b in delta.rows()]
    for u in rivals:
        rows.append((tuple(Fraction(x - y) for x, y in zip(u.slope, t.slope)) + (Fraction(1),), t.coeff - u.coeff))
    rows.append(((Fraction(0),) * n + (Fraction(1),), Fraction(1)))
    obj = (Fraction(0),) * n + (Fraction(1),)
    res = lp_solve(LPProblem(obj, "max", rows))
    if res.status != LPStatus.OPTIMAL:
        raise ArithmeticError(f"margin LP unexpectedly {res.status.value}")
    return res.value, res.witness_point[:n]


def _essential_terms(f: TropPoly, delta: HPolytope) -> list[AffineMonomial]:
    delta.require(bounded=True, full_dim=True)
    terms = list(prune_dominated(f).terms)
    if len(terms) == 1:
        return terms
    essential = {}
    for p in _grid_points(delta):
        w = _strict_winner(terms, p)
        if w is not None:
            essential[w.slope] = w
    for t in terms:
        if t.slope in essential:
            continue
        rivals = {u.slope: u for u in essential.values()}
        if not rivals:
            other = next(u for u in terms if u.slope != t.slope)
            rivals[other.slope] = other
        while True:
            margin, p = _win_margin(t, rivals.values(), delta)
            if margin <= 0:
                break
            vt = t(p)
            beaters = [u for u in terms if u.slope != t.slope and u(p) >= vt]
            if not beaters:
                essential[t.slope] = t
                break
            for u in beaters:
                rivals[u.slope] = u
    return [t for t in terms if t.slope in essential]


def essential_slopes(f: TropPoly, delta: HPolytope) -> set:
    """Slopes of f that are strictly maximal on a nonempty open subset of delta."""
    if f.is_neg_inf():
        raise ValueError("the empty polynomial has no essential slopes")
    if f.dim != delta.dim:
        raise ValueError("dimension mismatch")
    return {t.slope for t in _essential_terms(f, delta)}


@dataclass(frozen=True)
class CanonicalForm:
    poly: TropPoly
    pair: MonoidPair

    @property
    def terms(self):
        return self.poly.terms

    def term_set(self) -> set:
        return {(t.slope, t.coeff) for t in self.poly.terms}


def canonical_form(f: TropPoly, pair: MonoidPair) -> CanonicalForm:
    if f.dim != pair.dim:
        raise ValueError("dimension mismatch")
    delta = pair.delta
    if f.is_neg_inf():
        return CanonicalForm(f, pair)
    ess = _essential_terms(f, delta)
    terms = tuple(AffineMonomial(t.slope, saturate_coeff(f, t.slope, delta)) for t in ess)
    return CanonicalForm(TropPoly(f.dim, terms), pair)


@dataclass(frozen=True)
class ClosureAnswer:
    """Result of :func:`is_integrally_closed_elt`.

    YES means closed up to ``radius``; NO carries the tangent monomial that is
    integral over the element but not syntactically below it.
    """

    status: Answer
    witness: AffineMonomial | None = None
    evidence: OrderAnswer | None = None
    radius: int | None = None
    bound: int | None = None
    checked: int = 0


def candidate_slopes(f: TropPoly, pair: MonoidPair, radius: int) -> list[tuple]:
    """Lattice points of conv(slopes of f) + radius * conv(0, F_1, ..., F_r)."""
    normals = [(0,) * pair.dim] + [tuple(radius * v for v in F) for F, _ in pair.constraints]
    pts = sorted({tuple(a + b for a, b in zip(k, s)) for k in f.slopes for s in normals})
    lo = [min(p[i] for p in pts) for i in range(pair.dim)]
    hi = [max(p[i] for p in pts) for i in range(pair.dim)]
    out = []
    for k in itertools.product(*(range(lo[i], hi[i] + 1) for i in range(pair.dim))):
        if k in pts or hull_membership(k, pts):
            out.append(k)
    return out


def is_integrally_closed_elt(f: TropPoly, pair: MonoidPair, radius: int = 1, bound: int = 16) -> ClosureAnswer:
    """Check every tangent monomial near f's Newton polytope lies syntactically below f.

    Slopes tilted toward the constraint normals are where the monoid
    relations produce new integral elements. Completeness is only claimed
    up to ``radius``.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if f.is_neg_inf():
        return ClosureAnswer(Answer.YES, radius=radius)
    status = Answer.YES
    undetermined = None
    cands = candidate_slopes(f, pair, radius)
    for k in cands:
        m = AffineMonomial(k, saturate_coeff(f, k, pair.delta))
        ans = syntactic_leq(TropPoly(f.dim, (m,)), f, pair, bound)
        if ans.status == Answer.NO:
            return ClosureAnswer(Answer.NO, m, ans, radius, bound, len(cands))
        if ans.status == Answer.UNDETERMINED:
            status = Answer.UNDETERMINED
            undetermined = undetermined or (m, ans)
    if undetermined:
        return ClosureAnswer(status, undetermined[0], undetermined[1], radius, bound, len(cands))
    return ClosureAnswer(status, radius=radius, bound=bound, checked=len(cands))


@dataclass(frozen=True)
class DependenceWitness:
    """``n (x v y) <= (n-1)(x v y) + y`` holds syntactically; ``certificate`` proves it."""

    n: int
    lhs: TropPoly
    rhs: TropPoly
    certificate: OrderAnswer


@dataclass(frozen=True)
class NotFound:
    n_max: int
    refutation: OrderAnswer | None = None
    undetermined: bool = False
    bound: int | None = None


def integral_over(x: TropPoly, y: TropPoly, pair: MonoidPair, n_max: int = 4, bound: int = 16):
    """Least n <= n_max satisfying the reduction inequality, with its certificate."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    xy = join(x, y)
    strongest = None
    undetermined = False
    for n in range(1, n_max + 1):
        lhs = scale(n, xy)
        rhs = plus(scale(n - 1, xy), y)
        ans = syntactic_leq(lhs, rhs, pair, bound)
        if ans.status == Answer.YES:
            return DependenceWitness(n, lhs, rhs, ans)
        if ans.status == Answer.UNDETERMINED:
            undetermined = True
        strongest = ans
    return NotFound(n_max, strongest, undetermined, bound if undetermined else None)


def cancels(f: TropPoly, g: TropPoly, h: TropPoly, pair: MonoidPair) -> bool:
    """Adding the bounded element h neither creates nor destroys pointwise equality."""
    if h.is_neg_inf():
        raise ValueError("h must be a nonempty (bounded) polynomial")
    delta = pair.delta
    return pointwise_eq(plus(f, h), plus(g, h), delta) == pointwise_eq(f, g, delta)


def linearity_cells(f: TropPoly, pair: MonoidPair) -> list[dict]:
    """For each essential term, the H-representation of the region where it attains the max."""
    from .geometry import HalfSpace

    form = canonical_form(f, pair)
    cells = []
    for t in form.terms:
        hs = list(pair.delta.halfspaces)
        for u in form.terms:
            if u.slope != t.slope:
                # u(p) <= t(p)  <=>  (k_u - k_t) . p <= c_t - c_u
                hs.append(HalfSpace(tuple(a - b for a, b in zip(u.slope, t.slope)), t.coeff - u.coeff))
        cells.append({"term": t, "region": HPolytope(f.dim, tuple(hs))})
    return cells
