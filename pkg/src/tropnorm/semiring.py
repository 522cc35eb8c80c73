"""Tropical polynomials in the free semiring of a polytope monoid pair.

A :class:`TropPoly` is a finite formal join of affine monomials
``p -> slope . p + coeff``. Join is union of terms (per-slope max), plus is
the Minkowski sum of term sets. The *syntactic* order is that of the free
semiring ``B[Q; Q+]``, where ``Q+`` is generated by the defining inequalities
of the polytope together with the nonpositive constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property

from .geometry import (
    HPolytope,
    LPProblem,
    LPStatus,
    as_rational,
    dot,
    lp_solve,
    primitive,
    qvec,
)

NEG_INF = None  # value of eval on the empty polynomial


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"

    def __and__(self, other: "Answer") -> "Answer":
        if Answer.NO in (self, other):
            return Answer.NO
        if Answer.UNDETERMINED in (self, other):
            return Answer.UNDETERMINED
        return Answer.YES


@dataclass(frozen=True, order=True)
class AffineMonomial:
    slope: tuple[int, ...]
    coeff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", tuple(int(k) for k in self.slope))
        object.__setattr__(self, "coeff", as_rational(self.coeff))

    def __call__(self, p) -> Fraction:
        return dot(self.slope, p) + self.coeff


@dataclass(frozen=True)
class TropPoly:
    """Immutable tropical polynomial; ``terms`` is sorted by slope."""

    dim: int
    terms: tuple[AffineMonomial, ...] = ()

    def __post_init__(self):
        merged: dict[tuple, Fraction] = {}
        for t in self.terms:
            t = t if isinstance(t, AffineMonomial) else AffineMonomial(*t)
            if len(t.slope) != self.dim:
                raise ValueError(f"term slope {t.slope} does not have dimension {self.dim}")
            old = merged.get(t.slope)
            if old is None or t.coeff > old:
                merged[t.slope] = t.coeff
        object.__setattr__(self, "terms", tuple(AffineMonomial(k, c) for k, c in sorted(merged.items())))

    @classmethod
    def from_terms(cls, dim: int, pairs) -> "TropPoly":
        return cls(dim, tuple(AffineMonomial(k, c) for k, c in pairs))

    @classmethod
    def neg_inf(cls, dim: int) -> "TropPoly":
        return cls(dim, ())

    @classmethod
    def one(cls, dim: int) -> "TropPoly":
        """The multiplicative identity: the zero monomial."""
        return cls(dim, (AffineMonomial((0,) * dim, 0),))

    @classmethod
    def monomial(cls, slope, coeff=0) -> "TropPoly":
        return cls(len(slope), (AffineMonomial(slope, coeff),))

    @cached_property
    def as_dict(self) -> dict:
        return {t.slope: t.coeff for t in self.terms}

    @property
    def slopes(self) -> list:
        return [t.slope for t in self.terms]

    def is_neg_inf(self) -> bool:
        return not self.terms

    def __or__(self, other: "TropPoly") -> "TropPoly":
        return join(self, other)

    def __add__(self, other: "TropPoly") -> "TropPoly":
        return plus(self, other)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "-inf"
        return " v ".join(format_monomial(t) for t in self.terms)


def format_monomial(t: AffineMonomial) -> str:
    parts = []
    for i, k in enumerate(t.slope):
        if k:
            var = f"X{i + 1}" if len(t.slope) > 1 else "X"
            coef = "" if k == 1 else "-" if k == -1 else str(k)
            parts.append(f"{coef}{var}")
    body = " + ".join(parts).replace("+ -", "- ")
    if not parts:
        return str(t.coeff)
    if t.coeff:
        sign = "+" if t.coeff > 0 else "-"
        return f"{body} {sign} {abs(t.coeff)}"
    return body


def _check_dims(*polys):
    dims = {p.dim for p in polys}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")


def join(f: TropPoly, g: TropPoly) -> TropPoly:
    _check_dims(f, g)
    return TropPoly(f.dim, f.terms + g.terms)


def plus(f: TropPoly, g: TropPoly) -> TropPoly:
    _check_dims(f, g)
    out: dict[tuple, Fraction] = {}
    for s in f.terms:
        for t in g.terms:
            k = tuple(a + b for a, b in zip(s.slope, t.slope))
            c = s.coeff + t.coeff
            if k not in out or c > out[k]:
                out[k] = c
    return TropPoly.from_terms(f.dim, out.items())


def scale(m: int, f: TropPoly) -> TropPoly:
    """The m-fold sum ``f + ... + f`` (``scale(0, f)`` is the zero monomial)."""
    if m < 0:
        raise ValueError("scale factor must be nonnegative")
    result = TropPoly.one(f.dim)
    base = f
    while m:
        if m & 1:
            result = plus(result, base)
        m >>= 1
        if m:
            base = plus(base, base)
    return result


def evaluate(f: TropPoly, p):
    """``max_t t(p)``, or ``None`` (standing for -inf) on the empty polynomial."""
    p = qvec(p)
    if len(p) != f.dim:
        raise ValueError(f"point of dimension {len(p)} for a polynomial of dimension {f.dim}")
    if not f.terms:
        return NEG_INF
    return max(t(p) for t in f.terms)


@dataclass(frozen=True)
class MonoidPair:
    """Monoid pair of a bounded, full-dimensional rational polytope.

    The polytope is ``{p : F_i . p <= lambda_i}``; each ``F_i`` is made
    primitive on construction. The positive monoid ``Q+`` consists of the
    affine functions ``sum a_i (F_i - lambda_i) + c`` with ``a_i`` natural
    numbers and ``c <= 0``: exactly the generated functions that are
    nonpositive on the polytope.
    """

    dim: int
    constraints: tuple = field(default=())

    def __post_init__(self):
        cons = []
        for F, lam in self.constraints:
            if len(F) != self.dim:
                raise ValueError(f"constraint normal {tuple(F)} does not have dimension {self.dim}")
            cons.append(primitive(F, lam))
        object.__setattr__(self, "constraints", tuple(cons))
        r = self.delta.report
        if not (r.nonempty and r.bounded and r.full_dim):
            raise ValueError(
                f"monoid pair polytope must be nonempty, bounded and full-dimensional; got {r}"
            )

    @classmethod
    def box(cls, lower, upper) -> "MonoidPair":
        poly = HPolytope.box(lower, upper)
        return cls(poly.dim, tuple((h.normal, h.bound) for h in poly.halfspaces))

    @cached_property
    def delta(self) -> HPolytope:
        return HPolytope(self.dim, tuple(self.constraints))


@dataclass(frozen=True)
class MembershipAnswer:
    """Answer to "is ``slope . p + const`` in ``Q+``?".

    For YES, ``witness = (a, c)`` with ``sum a_i F_i == slope`` and
    ``-sum a_i lambda_i + c == const``, ``c <= 0``. For NO, ``certificate`` is
    a point of the polytope where the affine function is strictly positive;
    this is the Farkas vector refuting the rational relaxation.
    """

    status: Answer
    witness: tuple | None = None
    certificate: tuple | None = None
    bound: int | None = None

    def verify(self, d, mu, pair: MonoidPair) -> bool:
        d = tuple(d)
        mu = as_rational(mu)
        if self.status == Answer.YES:
            a, c = self.witness
            if any(ai < 0 for ai in a) or c > 0:
                return False
            slope = tuple(sum(ai * F[j] for ai, (F, _) in zip(a, pair.constraints)) for j in range(pair.dim))
            const = -sum((ai * lam for ai, (_, lam) in zip(a, pair.constraints)), Fraction(0)) + c
            return slope == d and const == mu
        if self.status == Answer.NO:
            p = self.certificate
            return pair.delta.contains(p) and dot(d, p) + mu > 0
        return True


def _relaxation(pair: MonoidPair, d, extra_rows=()):
    # variables a_1..a_r; minimize sum a_i lambda_i subject to F^T a = d, a >= 0
    r = len(pair.constraints)
    lams = tuple(lam for _, lam in pair.constraints)
    cons = []
    for i in range(r):
        row = [0] * r
        row[i] = -1
        cons.append((tuple(row), 0))
    cons.extend(extra_rows)
    eqs = [(tuple(F[j] for F, _ in pair.constraints), d[j]) for j in range(pair.dim)]
    return lp_solve(LPProblem(lams, "min", cons, eqs))


def monoid_member(d, mu, pair: MonoidPair, bound: int = 16) -> MembershipAnswer:
    """Decide whether the affine function ``d . p + mu`` lies in ``Q+``.

    The rational relaxation is decided exactly (its optimum is
    ``max_{p in Delta} d . p``); integrality is then searched by
    branch-and-bound over ``a`` with ``sum a_i <= bound``.
    """
    if bound < 1:
        raise ValueError("enumeration bound must be positive")
    d = tuple(int(v) for v in d)
    mu = as_rational(mu)
    if len(d) != pair.dim:
        raise ValueError(f"slope of dimension {len(d)} for a pair of dimension {pair.dim}")
    r = len(pair.constraints)
    if not any(d) and mu <= 0:
        return MembershipAnswer(Answer.YES, ((0,) * r, mu))
    top = lp_solve(LPProblem(d, "max", pair.delta.rows()))
    if top.value + mu > 0:
        return MembershipAnswer(Answer.NO, certificate=top.witness_point)

    lams = [lam for _, lam in pair.constraints]
    base_rows = [((1,) * r, bound), (tuple(lams), -mu)]
    stack = [()]
    while stack:
        branch = stack.pop()
        res = _relaxation(pair, d, base_rows + list(branch))
        if res.status != LPStatus.OPTIMAL:
            continue
        a = res.witness_point
        frac = next((i for i, v in enumerate(a) if v.denominator != 1), None)
        if frac is None:
            a = tuple(int(v) for v in a)
            c = mu + sum((ai * lam for ai, lam in zip(a, lams)), Fraction(0))
            return MembershipAnswer(Answer.YES, (a, c))
        e = [0] * r
        e[frac] = 1
        lo = ((tuple(e), math.floor(a[frac])),)
        e[frac] = -1
        hi = ((tuple(e), -math.ceil(a[frac])),)
        stack.append(branch + hi)
        stack.append(branch + lo)
    return MembershipAnswer(Answer.UNDETERMINED, bound=bound)


def _term_leq(t: AffineMonomial, u: AffineMonomial, pair, bound) -> MembershipAnswer:
    d = tuple(a - b for a, b in zip(t.slope, u.slope))
    return monoid_member(d, t.coeff - u.coeff, pair, bound)


@dataclass(frozen=True)
class OrderAnswer:
    """Three-valued answer with per-term evidence.

    ``evidence`` lists, for each term of the left side, the term of the right
    side it was compared against and the membership answer (the YES witness,
    or for a refuted term the refutation against every right-hand term).
    """

    status: Answer
    evidence: tuple = ()
    bound: int | None = None


def syntactic_leq(f: TropPoly, g: TropPoly, pair: MonoidPair, bound: int = 16) -> OrderAnswer:
    _check_dims(f, g)
    if f.dim != pair.dim:
        raise ValueError("polynomial and monoid pair dimensions differ")
    evidence = []
    status = Answer.YES
    for t in f.terms:
        answers = []
        found = None
        for u in g.terms:
            ans = _term_leq(t, u, pair, bound)
            if ans.status == Answer.YES:
                found = (t, u, ans)
                break
            answers.append((t, u, ans))
        if found:
            evidence.append(found)
            continue
        if all(a.status == Answer.NO for _, _, a in answers):
            return OrderAnswer(Answer.NO, tuple(answers), bound)
        status = Answer.UNDETERMINED
        evidence.extend(a for a in answers if a[2].status == Answer.UNDETERMINED)
    return OrderAnswer(status, tuple(evidence), bound if status == Answer.UNDETERMINED else None)


def syntactic_eq(f: TropPoly, g: TropPoly, pair: MonoidPair, bound: int = 16) -> OrderAnswer:
    fwd = syntactic_leq(f, g, pair, bound)
    if fwd.status == Answer.NO:
        return fwd
    back = syntactic_leq(g, f, pair, bound)
    status = fwd.status & back.status
    return OrderAnswer(status, fwd.evidence + back.evidence, bound if status == Answer.UNDETERMINED else None)
