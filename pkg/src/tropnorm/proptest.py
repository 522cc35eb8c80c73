"""Seeded randomized property suites.

Each case draws from its own ``random.Random`` (seeded from the suite seed
and the case index) so a failing case reproduces in isolation.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import serialize as ser
from .geometry import HPolytope, LPProblem, LPStatus, dot, lp_solve, verify_lp_result
from .monomial import (
    MonomialIdeal,
    dependence_oracle,
    ideal_product,
    ideal_sum,
    integral_closure,
    reduction_number,
)
from .normalization import (
    AffineMonomial,
    DependenceWitness,
    cancels,
    canonical_form,
    integral_over,
    pointwise_eq,
    pointwise_leq,
    saturate_coeff,
)
from .semiring import MonoidPair, TropPoly, evaluate, join, plus, scale

SUITES = ("semiring-laws", "normalization", "lemma-3.1", "cancellativity", "monomial-oracle", "lp-oracle")


@dataclass
class Report:
    suite: str
    seed: int
    cases: int
    checks: int = 0
    failures: list = field(default_factory=list)
    undetermined: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.undetermined

    def fail(self, case: int, prop: str, reproducer: dict):
        self.failures.append({"case": case, "property": prop, "reproducer": reproducer})

    def count(self, key: str, by: int = 1):
        self.stats[key] = self.stats.get(key, 0) + by

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "checks": self.checks,
            "failures": self.failures,
            "undetermined": self.undetermined,
            "stats": dict(sorted(self.stats.items())),
        }


def case_rng(seed: int, case: int) -> random.Random:
    return random.Random(seed * 1_000_003 + case)


def random_rational(rng, lo=-3, hi=3, max_den=4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_poly(rng, dim, max_terms=5, slope_range=3, min_terms=1) -> TropPoly:
    n_terms = rng.randint(min_terms, max_terms)
    terms = [
        AffineMonomial(tuple(rng.randint(-slope_range, slope_range) for _ in range(dim)), random_rational(rng))
        for _ in range(n_terms)
    ]
    return TropPoly(dim, tuple(terms))


def random_pair(rng, dim, max_cuts=2) -> MonoidPair:
    """A random bounded full-dimensional polytope: a rational box with extra cuts."""
    while True:
        lo = [random_rational(rng, -2, 1, 3) for _ in range(dim)]
        hi = [a + Fraction(rng.randint(1, 6), rng.randint(1, 3)) for a in lo]
        center = [(a + b) / 2 for a, b in zip(lo, hi)]
        poly = HPolytope.box(lo, hi)
        cons = [(h.normal, h.bound) for h in poly.halfspaces]
        for _ in range(rng.randint(0, max_cuts)):
            normal = tuple(rng.randint(-2, 2) for _ in range(dim))
            if not any(normal):
                continue
            margin = Fraction(rng.randint(1, 4), rng.randint(2, 4))
            cons.append((normal, dot(normal, center) + margin))
        try:
            return MonoidPair(dim, tuple(cons))
        except ValueError:
            continue


def sample_points(delta: HPolytope, steps: int = 3) -> list:
    lo, hi = delta.bounding_box
    axes = [[lo[i] + (hi[i] - lo[i]) * Fraction(j, steps) for j in range(steps + 1)] for i in range(delta.dim)]
    return [p for p in itertools.product(*axes) if delta.contains(p)]


def _repro(**kw) -> dict:
    return {k: ser.to_jsonable(v) for k, v in kw.items()}


# ----------------------------------------------------------------------------


def suite_semiring_laws(report: Report):
    neg = None
    for case in range(report.cases):
        rng = case_rng(report.seed, case)
        dim = rng.randint(1, 3)
        f, g, h = (random_poly(rng, dim, min_terms=0) for _ in range(3))
        bot, one = TropPoly.neg_inf(dim), TropPoly.one(dim)
        laws = {
            "join-assoc": join(join(f, g), h) == join(f, join(g, h)),
            "join-comm": join(f, g) == join(g, f),
            "join-idem": join(f, f) == f,
            "join-unit": join(f, bot) == f,
            "plus-assoc": plus(plus(f, g), h) == plus(f, plus(g, h)),
            "plus-comm": plus(f, g) == plus(g, f),
            "plus-unit": plus(f, one) == f,
            "absorb": plus(f, bot) == bot,
            "distrib": plus(f, join(g, h)) == join(plus(f, g), plus(f, h)),
            "scale-sum": scale(3, f) == plus(scale(2, f), f),
        }
        p = tuple(random_rational(rng) for _ in range(dim))
        ef, eg = evaluate(f, p), evaluate(g, p)
        e_join = evaluate(join(f, g), p)
        e_plus = evaluate(plus(f, g), p)
        vals = [v for v in (ef, eg) if v is not neg]
        laws["eval-join"] = e_join == (max(vals) if vals else neg)
        laws["eval-plus"] = e_plus == (neg if ef is neg or eg is neg else ef + eg)
        for name, ok in laws.items():
            report.checks += 1
            if not ok:
                report.fail(case, name, _repro(f=f, g=g, h=h, point=p))


def suite_normalization(report: Report):
    for case in range(report.cases):
        rng = case_rng(report.seed, case)
        dim = rng.randint(1, 3)
        pair = random_pair(rng, dim)
        delta = pair.delta
        f = random_poly(rng, dim)
        cf = canonical_form(f, pair)
        report.checks += 1
        if canonical_form(cf.poly, pair).term_set() != cf.term_set():
            report.fail(case, "idempotence", _repro(f=f, pair=pair))
        for p in sample_points(delta):
            report.checks += 1
            if evaluate(cf.poly, p) != evaluate(f, p):
                report.fail(case, "function-preservation", _repro(f=f, pair=pair, point=p))
                break
        g = _equal_or_perturbed(rng, f, pair, equal=(case % 2 == 0))
        report.checks += 1
        same_form = canonical_form(g, pair).term_set() == cf.term_set()
        if same_form != pointwise_eq(f, g, delta):
            report.fail(case, "equality-completeness", _repro(f=f, g=g, pair=pair))
        report.count("equal-pairs" if same_form else "unequal-pairs")
        h = random_poly(rng, dim, max_terms=3)
        ch = canonical_form(h, pair).poly
        for name, op in (("hom-join", join), ("hom-plus", plus)):
            report.checks += 1
            lhs = canonical_form(op(f, h), pair).term_set()
            rhs = canonical_form(op(cf.poly, ch), pair).term_set()
            if lhs != rhs:
                report.fail(case, name, _repro(f=f, h=h, pair=pair))


def _equal_or_perturbed(rng, f: TropPoly, pair: MonoidPair, equal: bool) -> TropPoly:
    """f plus tangent/dominated terms (equal=True), or that with one term perturbed upward."""
    dim = f.dim
    extra = []
    for _ in range(rng.randint(1, 3)):
        k = tuple(rng.randint(-3, 3) for _ in range(dim))
        lam = saturate_coeff(f, k, pair.delta)
        extra.append(AffineMonomial(k, lam - Fraction(rng.randint(0, 2), rng.randint(1, 3))))
    g = TropPoly(dim, f.terms + tuple(extra))
    if equal:
        return g
    # raise the highest-lying term over the interior point, so ev changes there
    p = pair.delta.interior_point
    top = max(g.terms, key=lambda t: t(p))
    bump = Fraction(rng.randint(1, 4), rng.randint(1, 4))
    return TropPoly(dim, tuple(t for t in g.terms if t != top) + (AffineMonomial(top.slope, top.coeff + bump),))


def suite_binomial_reduction(report: Report, n_max: int = 3, bound: int = 64):
    for case in range(report.cases):
        rng = case_rng(report.seed, case)
        dim = rng.randint(1, 3)
        pair = random_pair(rng, dim)
        delta = pair.delta
        f = random_poly(rng, dim)
        g = random_poly(rng, dim)
        n = rng.randint(1, 4)
        report.checks += 1
        lhs = canonical_form(scale(n, join(f, g)), pair).term_set()
        rhs = canonical_form(join(scale(n, f), scale(n, g)), pair).term_set()
        if lhs != rhs:
            report.fail(case, "binomial", _repro(f=f, g=g, n=n, pair=pair))
        report.checks += 1
        if pointwise_leq(scale(n, f), scale(n, g), delta) and not pointwise_leq(f, g, delta):
            report.fail(case, "divisibility", _repro(f=f, g=g, n=n, pair=pair))
        x, y = _reduction_instance(rng, pair)
        report.checks += 1
        res = integral_over(x, y, pair, n_max=n_max, bound=bound)
        if isinstance(res, DependenceWitness):
            report.count("reduction-witnesses")
            report.count(f"reduction-n={res.n}")
            if not pointwise_eq(join(x, y), y, delta):
                report.fail(case, "reduction-soundness", _repro(x=x, y=y, pair=pair, n=res.n))
        else:
            report.count("reduction-not-found")
            if res.undetermined:
                report.undetermined += 1
                report.count("reduction-undetermined")


def _reduction_instance(rng, pair: MonoidPair):
    dim = pair.dim
    y = random_poly(rng, dim, max_terms=3, slope_range=2)
    kind = rng.randrange(3)
    if kind == 0:
        # x is a tangent monomial of y: pointwise below, integral over y
        k = tuple(rng.randint(-2, 2) for _ in range(dim))
        x = TropPoly(dim, (AffineMonomial(k, saturate_coeff(y, k, pair.delta)),))
    elif kind == 1:
        x = TropPoly(dim, (rng.choice(y.terms),))
    else:
        x = random_poly(rng, dim, max_terms=2, slope_range=2)
    return x, y


def suite_cancellativity(report: Report):
    for case in range(report.cases):
        rng = case_rng(report.seed, case)
        dim = rng.randint(1, 3)
        pair = random_pair(rng, dim)
        f = random_poly(rng, dim)
        g = _equal_or_perturbed(rng, f, pair, equal=(case % 2 == 0)) if rng.random() < 0.7 else random_poly(rng, dim)
        h = random_poly(rng, dim, max_terms=3)
        report.checks += 1
        if pointwise_eq(f, g, pair.delta):
            report.count("equal-pairs")
        if not cancels(f, g, h, pair):
            report.fail(case, "cancels", _repro(f=f, g=g, h=h, pair=pair))


def random_ideal(rng, max_dim=3, max_gens=5, max_coord=6, dim=None) -> MonomialIdeal:
    dim = dim or rng.randint(1, max_dim)
    gens = [tuple(rng.randint(0, max_coord) for _ in range(dim)) for _ in range(rng.randint(1, max_gens))]
    return MonomialIdeal(dim, tuple(gens))


def suite_monomial_oracle(report: Report, m_max: int = 8, n_max: int = 10):
    for case in range(report.cases):
        rng = case_rng(report.seed, case)
        I = random_ideal(rng)
        J = integral_closure(I)
        top = [max(g[i] for g in I.gens) for i in range(I.dim)]
        for v in itertools.product(*(range(t + 1) for t in top)):
            report.checks += 1
            if J.contains(v) != (dependence_oracle(v, I, m_max) is not None):
                report.fail(case, "closure-vs-oracle", _repro(ideal=I, point=list(v)))
        report.checks += 1
        if not (I <= J and integral_closure(J) == J):
            report.fail(case, "closure-operator", _repro(ideal=I))
        report.checks += 1
        r = reduction_number(I, J, n_max)
        if r is None:
            report.fail(case, "reduction-number", _repro(ideal=I, closure=J))
        else:
            report.count(f"reduction-number={r}")
        K = random_ideal(rng, max_gens=3, max_coord=3, dim=I.dim)
        if True:
            report.checks += 1
            if integral_closure(ideal_product(I, K)) != integral_closure(ideal_product(J, integral_closure(K))):
                report.fail(case, "sum-property", _repro(I=I, K=K))
            report.checks += 1
            if ideal_product(I, ideal_sum(J, K)) != ideal_sum(ideal_product(I, J), ideal_product(I, K)):
                report.fail(case, "distributivity", _repro(I=I, J=J, K=K))


def brute_force_lp(problem: LPProblem):
    """Optimum by enumerating every vertex (intersection of n constraint rows)."""
    n = problem.dim
    rows = problem.constraints
    best = None
    for sub in itertools.combinations(rows, n):
        x = _solve_square([a for a, _ in sub], [b for _, b in sub])
        if x is None or not all(dot(a, x) <= b for a, b in rows):
            continue
        v = dot(problem.objective, x)
        if best is None or (v > best if problem.sense == "max" else v < best):
            best = v
    return best


def _solve_square(A, b):
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                fac = M[r][c] / M[c][c]
                M[r] = [x - fac * y for x, y in zip(M[r], M[c])]
    return tuple(M[i][-1] / M[i][i] for i in range(n))


def random_bounded_lp(rng) -> LPProblem:
    """Random LP whose region is bounded (box rows included) and usually nonempty."""
    n = rng.randint(1, 3)
    center = [random_rational(rng, -2, 2, 3) for _ in range(n)]
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), center[i] + rng.randint(1, 4)))
        e[i] = -1
        rows.append((tuple(e), -center[i] + rng.randint(1, 4)))
    for _ in range(rng.randint(0, 8 - 2 * n)):
        a = tuple(rng.randint(-3, 3) for _ in range(n))
        if not any(a):
            continue
        slack = Fraction(rng.randint(-2, 6), rng.randint(1, 3))
        rows.append((a, dot(a, center) + slack))
    c = tuple(rng.randint(-3, 3) for _ in range(n))
    return LPProblem(c, rng.choice(["max", "min"]), tuple(rows))


def suite_lp_oracle(report: Report):
    for case in range(report.cases):
        rng = case_rng(report.seed, case)
        prob = random_bounded_lp(rng)
        res = lp_solve(prob)
        best = brute_force_lp(prob)
        report.checks += 1
        report.count(res.status.value)
        agree = (res.status == LPStatus.INFEASIBLE) if best is None else (
            res.status == LPStatus.OPTIMAL and res.value == best)
        if not agree:
            report.fail(case, "oracle-agreement", _repro(problem=prob, status=res.status, value=res.value, oracle=best))
        report.checks += 1
        if not verify_lp_result(prob, res):
            report.fail(case, "certificate", _repro(problem=prob, result=res))


RUNNERS = {
    "semiring-laws": suite_semiring_laws,
    "normalization": suite_normalization,
    "lemma-3.1": suite_binomial_reduction,
    "cancellativity": suite_cancellativity,
    "monomial-oracle": suite_monomial_oracle,
    "lp-oracle": suite_lp_oracle,
}


def run_suite(name: str, seed: int = 1, cases: int = 100) -> Report:
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    report = Report(name, seed, cases)
    RUNNERS[name](report)
    return report
