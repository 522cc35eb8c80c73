"""Monomial ideals via their exponent vectors.

Ideal sum is union, product is Minkowski sum; both are kept minimalized so
that generator-set equality is ideal equality.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .geometry import LPStatus, hull_lp, hull_membership


def _dominates(a, b) -> bool:
    return all(x >= y for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    dim: int
    gens: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        vecs = set()
        for g in self.gens:
            g = tuple(int(v) for v in g)
            if len(g) != self.dim:
                raise ValueError(f"exponent vector {g} does not have dimension {self.dim}")
            if any(v < 0 for v in g):
                raise ValueError(f"exponent vector {g} has a negative entry")
            vecs.add(g)
        object.__setattr__(self, "gens", _antichain(vecs))

    @classmethod
    def zero(cls, dim: int) -> "MonomialIdeal":
        return cls(dim, ())

    def is_zero(self) -> bool:
        return not self.gens

    def contains(self, v) -> bool:
        return any(_dominates(v, g) for g in self.gens)

    def __le__(self, other: "MonomialIdeal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __str__(self) -> str:
        if not self.gens:
            return "(0)"
        names = "xyz" if self.dim <= 3 else None

        def mono(g):
            parts = []
            for i, e in enumerate(g):
                var = names[i] if names else f"x{i + 1}"
                if e == 1:
                    parts.append(var)
                elif e:
                    parts.append(f"{var}^{e}")
            return "*".join(parts) or "1"

        return "(" + ", ".join(mono(g) for g in self.gens) + ")"


def _antichain(vecs) -> tuple:
    vecs = sorted(set(vecs))
    keep = [v for v in vecs if not any(w != v and _dominates(v, w) for w in vecs)]
    return tuple(sorted(keep, reverse=True))


def minimalize(gens, dim: int | None = None) -> MonomialIdeal:
    gens = [tuple(g) for g in gens]
    if dim is None:
        if not gens:
            raise ValueError("dimension required for an empty generator set")
        dim = len(gens[0])
    return MonomialIdeal(dim, tuple(gens))


def _same_dim(I: MonomialIdeal, J: MonomialIdeal):
    if I.dim != J.dim:
        raise ValueError(f"dimension mismatch: {I.dim} vs {J.dim}")


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _same_dim(I, J)
    return MonomialIdeal(I.dim, I.gens + J.gens)


def ideal_product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    _same_dim(I, J)
    return MonomialIdeal(I.dim, tuple(tuple(a + b for a, b in zip(g, h)) for g in I.gens for h in J.gens))


@lru_cache(maxsize=4096)
def ideal_power(I: MonomialIdeal, m: int) -> MonomialIdeal:
    if m < 0:
        raise ValueError("ideal power must be nonnegative")
    if m == 0:
        return MonomialIdeal(I.dim, ((0,) * I.dim,))
    if m == 1:
        return I
    half = ideal_power(I, m // 2)
    sq = ideal_product(half, half)
    return ideal_product(sq, I) if m % 2 else sq


def integral_closure(I: MonomialIdeal) -> MonomialIdeal:
    """Lattice points of the Newton polyhedron ``conv(gens) + R_+^n``, minimalized.

    Points dominating a found point are skipped (the closure is an upper
    set); separating hyperplanes from failed membership LPs are cached and
    reused to reject further points without another LP.
    """
    if I.is_zero():
        return I
    n = I.dim
    top = [max(g[i] for g in I.gens) for i in range(n)]
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = []
    cuts = [(tuple(int(i == j) for j in range(n)), -min(g[i] for g in I.gens)) for i in range(n)]
    cuts.append(((1,) * n, -min(sum(g) for g in I.gens)))
    for v in itertools.product(*(range(t + 1) for t in top)):
        if any(_dominates(v, w) for w in found):
            continue
        if any(sum(a * b for a, b in zip(w, v)) + w0 < 0 for w, w0 in cuts):
            continue
        if I.contains(v):
            found.append(v)
            continue
        res = hull_lp(v, I.gens, rays)
        if res.status == LPStatus.OPTIMAL:
            found.append(v)
        else:
            z = res.certificate[1]
            cuts.append((z[:n], z[n]))
    return MonomialIdeal(n, tuple(found))


def dependence_oracle(v, I: MonomialIdeal, m_max: int = 8) -> int | None:
    """Least m <= m_max with ``m v`` in ``I^m``, by pure lattice search; None if absent."""
    if m_max < 1:
        raise ValueError("m_max must be positive")
    v = tuple(int(x) for x in v)
    if I.is_zero():
        return None
    for m in range(1, m_max + 1):
        if ideal_power(I, m).contains(tuple(m * x for x in v)):
            return m
    return None


def reduction_number(I: MonomialIdeal, J: MonomialIdeal, n_max: int = 10) -> int | None:
    """Least n <= n_max with ``J^(n+1) == I J^n``; None if none is found."""
    _same_dim(I, J)
    if not I <= J:
        raise ValueError("reduction_number requires I to be contained in J")
    for n in range(n_max + 1):
        Jn = ideal_power(J, n)
        if ideal_product(Jn, J) == ideal_product(I, Jn):
            return n
    return None


@dataclass(frozen=True)
class AffineMonoidGens:
    gens: tuple[tuple[int, ...], ...]
    degree_bound: int

    def __post_init__(self):
        gens = tuple(tuple(int(v) for v in g) for g in self.gens)
        if not gens:
            raise ValueError("an affine monoid needs at least one generator")
        if any(not any(g) for g in gens):
            raise ValueError("monoid generators must be nonzero")
        if len({len(g) for g in gens}) != 1:
            raise ValueError("monoid generators have mixed dimensions")
        if self.degree_bound < 1:
            raise ValueError("degree_bound must be positive")
        object.__setattr__(self, "gens", gens)

    @property
    def dim(self) -> int:
        return len(self.gens[0])


@dataclass(frozen=True)
class SaturationResult:
    gens: tuple[tuple[int, ...], ...]
    new_points: tuple[tuple[int, ...], ...]
    degree_bound: int

    @property
    def saturated(self) -> bool:
        return not self.new_points


def _reachable(m: AffineMonoidGens) -> set:
    B = m.degree_bound
    seen = {(0,) * m.dim}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in m.gens:
                q = tuple(a + b for a, b in zip(p, g))
                if q not in seen and all(abs(x) <= B for x in q):
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def saturate(m: AffineMonoidGens) -> SaturationResult:
    """Lattice points of the cone of ``m`` (within the bound) missing from the monoid."""
    B = m.degree_bound
    reach = _reachable(m)
    origin = [(0,) * m.dim]
    new = []
    for v in itertools.product(range(-B, B + 1), repeat=m.dim):
        if v in reach:
            continue
        if hull_membership(v, origin, m.gens):
            new.append(v)
    return SaturationResult(m.gens, tuple(new), B)


def is_saturated(m: AffineMonoidGens) -> bool:
    """Saturation test, complete only up to ``m.degree_bound``."""
    return saturate(m).saturated
