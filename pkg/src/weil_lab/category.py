"""Semisimple model of weight-0 motives over F_p with complex multiplication by K.

An object is a pair (V, F) with F semisimple; up to isomorphism it is the
multiset of Galois orbits of Frobenius eigenvalues, each orbit being a simple
object. Nothing is materialized beyond that eigenvalue data.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .brauer import tate_invariants
from .cyclotomic import CyclotomicField
from .modmath import is_prime
from .weil import (
    DivisibilityError,
    Explicit,
    WeilElement,
    center_degree,
    check_level,
    slope_of,
    torsion_element,
)

__all__ = [
    "MotiveObject",
    "SimpleClass",
    "UnsupportedLevel",
    "dual",
    "from_explicit",
    "simple_from_weil",
    "tensor",
    "torsion_character_check",
    "unit",
]


class UnsupportedLevel(ValueError):
    """Explicit decomposition needs every eigenvalue in K (level 1)."""


def _key(pi: WeilElement):
    # level 1: pi itself lies in K; otherwise only (slope, pi^n) is known
    x = pi.explicit
    xk = (x.numerator.coeffs, x.k) if x is not None else None
    if pi.level == 1:
        return xk
    return (pi.slope.entries, xk)


def from_explicit(x: Explicit, K: CyclotomicField, level: int = 1) -> WeilElement:
    """Wrap pi^level = x in K as a Weil element, recovering the torsion exponent of roots of unity."""
    s = slope_of(x, level, K)
    t = 0
    if s.is_zero() and level == 1:
        for j in range(K.torsion_order):
            if Explicit(K.root_of_unity(j), x.p, 0) == x:
                t = j
                break
    return WeilElement(K, x.p, level, t, s, x)


@dataclass(frozen=True)
class SimpleClass:
    """A Galois orbit of Frobenius eigenvalues.

    ``members`` are canonical keys of the orbit, sorted; ``representative``
    is the member with the smallest key.
    """

    field: CyclotomicField
    p: int
    level: int
    members: tuple
    representative: WeilElement = field(compare=False, hash=False, repr=False)
    rank_bounds: tuple[int, int] = field(compare=False)

    @property
    def rank(self) -> int:
        low, high = self.rank_bounds
        if low != high:
            raise UnsupportedLevel(f"rank only bounded by [{low}, {high}] at level {self.level}")
        return low

    @property
    def center_degree(self) -> int:
        """Degree of the centre of End over the algebraic closure."""
        return center_degree(self.representative)

    def elements(self) -> list[WeilElement]:
        """All orbit members as Weil elements (level 1 only)."""
        if self.level != 1:
            raise UnsupportedLevel("orbit members are only explicit at level 1")
        seen, out = set(), []
        for a in self.field.galois_group:
            y = self.representative.galois(a)
            if _key(y) not in seen:
                seen.add(_key(y))
                out.append(from_explicit(y.explicit, self.field))
        return sorted(out, key=_key)

    def label(self) -> str:
        rep = self.representative
        text = str(rep.explicit) if rep.explicit is not None else rep.slope.to_json()
        return f"[{text}]" if rep.level == 1 else f"[pi^{rep.level} = {text}]"


def simple_from_weil(pi: WeilElement) -> SimpleClass:
    orbit = {}
    for a in pi.field.galois_group:
        y = pi.galois(a)
        orbit.setdefault(_key(y), y)
    keys = tuple(sorted(orbit, key=repr))
    rep = orbit[keys[0]]
    size = len(keys)
    if pi.level == 1:
        # weight 0 over F_p: every invariant vanishes, End is the field Q[pi]
        bounds = (size, size)
    else:
        # [Q[pi^{mn}]:Q] <= [Q[pi]:Q] <= mn [Q[pi^{mn}]:Q]; the division index adds at most the lcm of local orders
        d = center_degree(pi)
        index = math.lcm(1, *tate_invariants(pi).orders())
        bounds = (d, pi.mn * d * index)
    if pi.level == 1 and pi.explicit is not None:
        rep = from_explicit(rep.explicit, pi.field)
    return SimpleClass(pi.field, pi.p, pi.level, keys, rep, bounds)


@dataclass(frozen=True)
class MotiveObject:
    """Formal sum of simple classes with positive multiplicities."""

    field: CyclotomicField
    p: int
    level: int
    terms: tuple[tuple[SimpleClass, int], ...] = ()

    @classmethod
    def of(cls, field: CyclotomicField, p: int, level: int, counts) -> MotiveObject:
        merged = Counter()
        for simple, mult in (counts.items() if isinstance(counts, dict) else counts):
            if mult < 0:
                raise ValueError("multiplicities must be non-negative")
            if mult:
                merged[simple] += mult
        terms = tuple(sorted(merged.items(), key=lambda t: repr(t[0].members)))
        return cls(field, p, level, terms)

    @classmethod
    def simple(cls, s: SimpleClass) -> MotiveObject:
        return cls.of(s.field, s.p, s.level, [(s, 1)])

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def rank(self) -> int:
        return sum(m * s.rank for s, m in self.terms)

    def __add__(self, other: MotiveObject) -> MotiveObject:
        _same_category(self, other)
        return MotiveObject.of(self.field, self.p, self.level, [*self.terms, *other.terms])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{m}*{s.label()}" if m > 1 else s.label() for s, m in self.terms)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "terms": [
                {"simple": s.label(), "multiplicity": m, "rank": s.rank, "center_degree": s.center_degree}
                for s, m in self.terms
            ],
        }


def _same_category(x: MotiveObject, y: MotiveObject) -> None:
    if (x.field, x.p, x.level) != (y.field, y.p, y.level):
        raise ValueError("objects live in different categories")


def unit(K: CyclotomicField, p: int) -> MotiveObject:
    return MotiveObject.simple(simple_from_weil(from_explicit(Explicit.one(K, p), K)))


def tensor(x: MotiveObject, y: MotiveObject) -> MotiveObject:
    """Tensor product: eigenvalues multiply, then the products are regrouped into orbits."""
    _same_category(x, y)
    if x.level != 1:
        raise UnsupportedLevel(f"tensor decomposition is only implemented at level 1, not {x.level}")
    eigen = Counter()
    reps = {}
    for s, a in x.terms:
        for t, b in y.terms:
            for u in s.elements():
                for v in t.elements():
                    prod = u.explicit * v.explicit
                    k = (prod.numerator.coeffs, prod.k)
                    eigen[k] += a * b
                    reps.setdefault(k, prod)
    counts = Counter()
    while eigen:
        k = next(iter(eigen))
        simple = simple_from_weil(from_explicit(reps[k], x.field))
        mult = eigen[k]
        for member in simple.members:
            if eigen.get(member) != mult:
                raise ArithmeticError("eigenvalue multiset is not Galois stable")
            del eigen[member]
        counts[simple] += mult
    return MotiveObject.of(x.field, x.p, 1, counts)


def dual(x: MotiveObject) -> MotiveObject:
    """Termwise inverse; at weight 0 the inverse of pi is its complex conjugate."""
    return MotiveObject.of(
        x.field, x.p, x.level, [(simple_from_weil(s.representative.inverse()), m) for s, m in x.terms]
    )


def _default_prime(K: CyclotomicField) -> int:
    p = K.conductor + 1
    while not is_prime(p):
        p += K.conductor
    return p


def torsion_character_check(K: CyclotomicField, n: int, p: int | None = None) -> tuple[bool, int]:
    """Whether the torsion of the implemented W_0^K(p, n) is cyclic of order exactly m*n.

    Without ``p`` the smallest prime split in K is used (inertia degree 1),
    so only h_K | n is required.
    """
    if p is None:
        p = _default_prime(K)
    if n < 1:
        raise DivisibilityError("level must be positive")
    check_level(K, p, n)
    gen = torsion_element(K, p, n, 1)
    acc, order = gen, 1
    while not acc.is_identity():
        acc = acc * gen
        order += 1
        if order > K.torsion_order * n:
            return False, order
    # the n-th power sits in K as zeta_m; its explicit order must be exactly m
    x = gen.explicit
    m_order = 1
    y = x
    while not y.is_one():
        y = y * x
        m_order += 1
    cyclic = m_order == K.torsion_order
    return cyclic and order == K.torsion_order * n, order
