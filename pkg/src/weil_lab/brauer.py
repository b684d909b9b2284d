"""Brauer invariants of motive endomorphism algebras and of cyclic algebras.

Places of the centre Q[pi^{mn}] are handled group-theoretically: with H the
stabilizer of the slope vector in Gal(K/Q), the p-adic places of the centre
are the H-orbits on the p-adic primes of K, and [K_w : F_v] = |D n H| where D
is the decomposition group of p.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .modmath import BadModulus, frac_mod1
from .weil import WeilElement, slope_stabilizer

__all__ = [
    "InvariantProfile",
    "LocalFieldData",
    "cyclic_invariant",
    "cyclic_invariant_tame",
    "cyclic_invariants_at_p",
    "division_rank",
    "is_commutative",
    "reciprocity_check",
    "tate_invariants",
    "tate_local_invariant",
]


@dataclass(frozen=True)
class LocalFieldData:
    """Completion F_v over Q_p: ramification e, residue degree f."""

    e: int
    f: int

    def __post_init__(self):
        if self.e < 1 or self.f < 1:
            raise ValueError("local degrees must be positive")

    @property
    def degree(self) -> int:
        return self.e * self.f


@dataclass(frozen=True)
class InvariantProfile:
    """Local invariants of a central division algebra over the centre F.

    ``entries`` maps each p-adic place of F (labelled by the smallest p-adic
    prime of K above it) to its invariant in [0, 1); every other finite place
    has invariant 0.
    """

    center_degree: int
    stabilizer: frozenset[int]
    entries: dict[int, Fraction] = field(hash=False)
    local: dict[int, LocalFieldData] = field(default_factory=dict, hash=False)
    real_invariant: Fraction = Fraction(0)
    weight: int = 0

    def orders(self) -> list[int]:
        values = [*self.entries.values(), self.real_invariant]
        return [v.denominator for v in values]

    def to_json(self) -> dict:
        return {
            "center_degree": self.center_degree,
            "stabilizer": sorted(self.stabilizer),
            "weight": self.weight,
            "real_invariant": _frac_str(self.real_invariant),
            "entries": {str(v): _frac_str(x) for v, x in sorted(self.entries.items())},
            "local": {str(v): {"e": d.e, "f": d.f} for v, d in sorted(self.local.items())},
            "sum": _frac_str(frac_mod1(sum(self.entries.values(), Fraction(0)) + self.real_invariant)),
        }


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def tate_local_invariant(
    kind: str,
    weight: int = 0,
    ord_pi: int | Fraction | None = None,
    ord_q: int | None = None,
    local_degree: int | None = None,
) -> Fraction:
    """One place of Tate's formula: ``kind`` is ``"real"``, ``"p"`` or ``"other"``."""
    if kind == "real":
        return Fraction(1, 2) if weight % 2 else Fraction(0)
    if kind == "p":
        return frac_mod1(Fraction(ord_pi) / ord_q * local_degree)
    if kind == "other":
        return Fraction(0)
    raise ValueError(f"unknown place kind {kind!r}")


def tate_invariants(pi: WeilElement, q_exp: int | None = None) -> InvariantProfile:
    """Invariants of End(X) for x = pi^n in K viewed as a Weil p^q_exp-number.

    ``q_exp`` defaults to the level n. The centre is Q[pi^{mn}].
    """
    if q_exp is None:
        q_exp = pi.level
    sp = pi.splitting
    ords = pi.explicit.ords(sp) if pi.explicit is not None else pi.ords()
    H = slope_stabilizer(pi.slope)
    G = pi.field.galois_group
    local_ext = len(H & sp.decomposition_group)  # [K_w : F_v]
    inertia_ext = len(H & sp.inertia_group)  # e(w/v)
    entries, local = {}, {}
    seen = set()
    for w in sp.X:
        if w in seen:
            continue
        orbit = {sp.act(a, w) for a in H}
        seen |= orbit
        v = min(orbit)
        e_v = sp.e // inertia_ext
        f_v = sp.f // (local_ext // inertia_ext)
        # ord_v(x) / ord_v(p^E) * [F_v:Q_p] = ord_w(x) f / (E [K_w:F_v])
        entries[v] = frac_mod1(Fraction(ords[w] * sp.f, q_exp * local_ext))
        local[v] = LocalFieldData(e_v, f_v)
    return InvariantProfile(len(G) // len(H), frozenset(H), entries, local)


def is_commutative(profile: InvariantProfile) -> bool:
    return all(x == 0 for x in profile.entries.values()) and profile.real_invariant == 0


def division_rank(profile: InvariantProfile) -> int:
    """rank = [D:F]^(1/2) * [F:Q], with [D:F]^(1/2) the lcm of the local orders."""
    return math.lcm(1, *profile.orders()) * profile.center_degree


def reciprocity_check(profile: InvariantProfile) -> bool:
    total = sum(profile.entries.values(), Fraction(0)) + profile.real_invariant
    return frac_mod1(total) == 0


def cyclic_invariant(local: LocalFieldData, n: int, ord_a: int) -> Fraction:
    """inv B(L (x) F, Frobenius, a) for L/Q_p unramified of degree n.

    ord_F(a) / (n ord_F(p)) * [F:Q_p] = ord_a * f / n.
    """
    if n < 1:
        raise ValueError("degree must be positive")
    return frac_mod1(Fraction(ord_a, n * local.e) * local.degree)


def cyclic_invariant_tame(a: int, l: int, d: int, p: int) -> Fraction:
    """Invariant at l of (L, Frob_p, a) for L the degree-d subfield of Q(zeta_l), a an l-unit.

    The reciprocity map sends a to sigma_{1/a}; writing 1/a = p^k times a d-th
    power in (Z/l)^x gives the invariant k/d.  It vanishes iff a is a d-th
    power mod l, i.e. iff a is a local norm.
    """
    if (l - 1) % d:
        raise BadModulus(f"{d} does not divide {l} - 1")
    if a % l == 0:
        raise BadModulus(f"{l} divides {a}")
    cofactor = (l - 1) // d
    target = pow(pow(a, -1, l), cofactor, l)
    gen = pow(p, cofactor, l)
    acc = 1
    for k in range(d):
        if acc == target:
            return Fraction(k, d)
        acc = acc * gen % l
    raise BadModulus(f"p={p} does not generate the order-{d} quotient of (Z/{l})^x")


def cyclic_invariants_at_p(pi: WeilElement) -> dict[int, Fraction]:
    """inv_v B(L (x) Q[pi^{mn}], Frobenius, pi^{mn}) at the p-adic places v, for p inert in L of degree mn.

    Uses the local data of the centre and ord_v(pi^{mn}) = m ord_w(pi^n) / e(w/v).
    """
    profile = tate_invariants(pi)
    sp = pi.splitting
    ords = pi.explicit.ords(sp) if pi.explicit is not None else pi.ords()
    inertia_ext = len(profile.stabilizer & sp.inertia_group)
    out = {}
    for v, loc in profile.local.items():
        ord_v, rem = divmod(pi.m * ords[v], inertia_ext)
        assert rem == 0, "pi^{mn} lies in the centre"
        out[v] = cyclic_invariant(loc, pi.mn, ord_v)
    return out
