"""Exact integral closure and normalization in idempotent semirings."""
from .geometry import (
    HalfSpace,
    HPolytope,
    LPProblem,
    LPResult,
    LPStatus,
    hull_membership,
    lp_solve,
    min_convex_pl,
    validate_polytope,
)
from .monomial import (
    AffineMonoidGens,
    MonomialIdeal,
    dependence_oracle,
    ideal_power,
    ideal_product,
    ideal_sum,
    integral_closure,
    is_saturated,
    minimalize,
    reduction_number,
    saturate,
)
from .normalization import (
    CanonicalForm,
    DependenceWitness,
    NotFound,
    cancels,
    canonical_form,
    essential_slopes,
    integral_over,
    is_integrally_closed_elt,
    pointwise_eq,
    pointwise_leq,
    saturate_coeff,
)
from .semiring import (
    AffineMonomial,
    Answer,
    MembershipAnswer,
    MonoidPair,
    TropPoly,
    evaluate,
    join,
    monoid_member,
    plus,
    scale,
    syntactic_eq,
    syntactic_leq,
)

__version__ = "0.1.0"
