"""Weight-0 Weil numbers in a cyclotomic field: slope vectors, explicit construction, torsion.

A Weil element of level ``n`` is a Weil p-number pi whose n-th power lies in
K.  It is stored as the pair (torsion exponent, slope vector of pi^n), with an
optional explicit certificate ``pi^n = numerator / p^k`` in K.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import (
    CyclotomicField,
    PrimeSplitting,
    RingElement,
    element_norm,
    find_prime_generator,
    split_prime,
    valuation_vector,
)
from .modmath import valuation

__all__ = [
    "DivisibilityError",
    "Explicit",
    "InfinityType",
    "NotIntegral",
    "SlopeVector",
    "WeilElement",
    "center_degree",
    "check_level",
    "construct_weil",
    "enumerate_weil",
    "integrality_vector",
    "kernel_basis",
    "kernel_box",
    "slope_of",
    "slope_stabilizer",
    "torsion_element",
    "torsion_order",
]


class DivisibilityError(ValueError):
    pass


class NotIntegral(ValueError):
    pass


def check_level(K: CyclotomicField, p: int, n: int) -> None:
    """Raise DivisibilityError unless f_K * h_K divides n."""
    f = split_prime(K, p).f
    if n < 1 or n % (f * K.class_number):
        raise DivisibilityError(
            f"level n={n} is not divisible by f_K*h_K = {f}*{K.class_number} for p={p} in Q(zeta_{K.conductor})"
        )


@dataclass(frozen=True)
class Explicit:
    """An element ``numerator / p^k`` of K, kept with k minimal."""

    numerator: RingElement
    p: int
    k: int = 0

    def __post_init__(self):
        num, k = self.numerator, self.k
        if num.is_zero():
            raise ValueError("zero is not a Weil number")
        while k > 0 and num.content_valuation(self.p) > 0:
            num = num.exact_div(self.p)
            k -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "k", k)

    @classmethod
    def one(cls, K: CyclotomicField, p: int) -> Explicit:
        return cls(K.one(), p, 0)

    @property
    def conductor(self) -> int:
        return self.numerator.conductor

    def __mul__(self, other: Explicit) -> Explicit:
        return Explicit(self.numerator * other.numerator, self.p, self.k + other.k)

    def __pow__(self, e: int) -> Explicit:
        if e < 0:
            return self.inverse() ** (-e)
        return Explicit(self.numerator**e, self.p, self.k * e)

    def galois(self, a: int) -> Explicit:
        return Explicit(self.numerator.galois(a), self.p, self.k)

    def conj(self) -> Explicit:
        return Explicit(self.numerator.conj(), self.p, self.k)

    def is_weight_zero(self) -> bool:
        """x * iota(x) == 1, i.e. numerator * conj(numerator) == p^(2k)."""
        prod = self.numerator * self.numerator.conj()
        return prod.is_rational() and prod.coeffs[0] == self.p ** (2 * self.k)

    def inverse(self) -> Explicit:
        if not self.is_weight_zero():
            raise ValueError("inverse is only implemented for weight-0 elements")
        return self.conj()

    def is_one(self) -> bool:
        return self.k == 0 and self.numerator.is_rational() and self.numerator.coeffs[0] == 1

    def ords(self, splitting: PrimeSplitting) -> dict[int, int]:
        vals = valuation_vector(self.numerator, splitting)
        return {w: v - self.k * splitting.e for w, v in vals.items()}

    def residue_mod(self, root: int, l: int) -> int:
        """Image in F_l under zeta -> root (l must not be p)."""
        return self.numerator.evaluate_mod(root, l) * pow(self.p, -self.k, l) % l

    def __str__(self) -> str:
        num = str(self.numerator)
        if self.k == 0:
            return num
        return f"({num})/{self.p}^{self.k}" if self.k > 1 else f"({num})/{self.p}"

    def to_json(self) -> dict:
        return {
            "numerator": [str(c) for c in self.numerator.coeffs],
            "denominator": str(self.p**self.k),
            "text": str(self),
        }


@dataclass(frozen=True)
class SlopeVector:
    """Integers a_w indexed by the p-adic primes of K (aligned with ``splitting.X``)."""

    field: CyclotomicField
    p: int
    entries: tuple[int, ...]

    def __post_init__(self):
        sp = self.splitting
        if len(self.entries) != len(sp.X):
            raise ValueError(f"expected {len(sp.X)} entries, got {len(self.entries)}")
        object.__setattr__(self, "entries", tuple(int(a) for a in self.entries))

    @classmethod
    def zero(cls, K: CyclotomicField, p: int) -> SlopeVector:
        return cls(K, p, (0,) * len(split_prime(K, p).X))

    @classmethod
    def from_dict(cls, K: CyclotomicField, p: int, values: dict[int, int]) -> SlopeVector:
        return cls(K, p, tuple(values.get(w, 0) for w in split_prime(K, p).X))

    @property
    def splitting(self) -> PrimeSplitting:
        return split_prime(self.field, self.p)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.splitting.X, self.entries))

    def in_kernel(self) -> bool:
        """Fiber sums over each prime of the real subfield vanish."""
        d = self.as_dict()
        return all(sum(d[w] for w in ws) == 0 for ws in self.splitting.fiber_sets().values())

    def is_zero(self) -> bool:
        return not any(self.entries)

    def act(self, a: int) -> SlopeVector:
        """sigma_a(s): (sigma_a s)_w = s_{sigma_a^-1 w}."""
        sp = self.splitting
        d = self.as_dict()
        moved = {sp.act(a, w): v for w, v in d.items()}
        return SlopeVector(self.field, self.p, tuple(moved[w] for w in sp.X))

    def __add__(self, other: SlopeVector) -> SlopeVector:
        return SlopeVector(self.field, self.p, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> SlopeVector:
        return SlopeVector(self.field, self.p, tuple(-a for a in self.entries))

    def scale(self, c: int) -> SlopeVector:
        return SlopeVector(self.field, self.p, tuple(c * a for a in self.entries))

    def to_json(self) -> dict[str, int]:
        return {str(w): a for w, a in self.as_dict().items()}


@dataclass(frozen=True)
class InfinityType:
    """sum n_sigma sigma over Gal(K/Q) = (Z/NZ)^x with n_sigma + n_{iota sigma} = 0."""

    field: CyclotomicField
    coefficients: tuple[tuple[int, int], ...]  # sorted (a, n_a), nonzero n_a only

    def __post_init__(self):
        n = self.field.conductor
        coeffs = dict(self.coefficients)
        for a, c in coeffs.items():
            if coeffs.get(-a % n, 0) != -c:
                raise ValueError("infinity type does not have weight 0")

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    def image(self, p: int) -> SlopeVector:
        """sum n_sigma sigma(w0) in Z^X."""
        sp = split_prime(self.field, p)
        out = dict.fromkeys(sp.X, 0)
        for a, c in self.coefficients:
            out[sp.act(a, 1)] += c
        return SlopeVector(self.field, p, tuple(out[w] for w in sp.X))

    def apply(self, x: RingElement, p: int) -> Explicit:
        """chi(x) = prod sigma(x)^n_sigma, for x whose norm is a power of p.

        With A the product over positive n_sigma, chi(x) = A / iota(A) and
        1/iota(A) = prod_{tau != 1} tau(iota A) / Norm(A).
        """
        A = x.__class__.constant(x.conductor, 1)
        for a, c in self.coefficients:
            if c > 0:
                A = A * x.galois(a) ** c
        if A.is_rational() and abs(A.coeffs[0]) == 1:
            return Explicit(A * A.coeffs[0], p, 0)
        norm = element_norm(A)
        if norm.denominator != 1 or norm <= 0:
            raise ValueError("unexpected norm")
        k = valuation(norm.numerator, p)
        if p**k != norm.numerator:
            raise ValueError("argument is not supported at p")
        iota_a = A.conj()
        num = A
        for a in self.field.galois_group[1:]:
            num = num * iota_a.galois(a)
        return Explicit(num, p, k)


def slope_stabilizer(s: SlopeVector) -> frozenset[int]:
    return frozenset(a for a in s.field.galois_group if s.act(a) == s)


@dataclass(frozen=True)
class WeilElement:
    """pi in W_0^K(p, n): level n, torsion exponent mod m*n, slope of pi^n, optional pi^n in K."""

    field: CyclotomicField
    p: int
    level: int
    torsion_exponent: int
    slope: SlopeVector
    explicit: Explicit | None = None

    def __post_init__(self):
        object.__setattr__(self, "torsion_exponent", self.torsion_exponent % self.mn)
        if not self.slope.in_kernel():
            raise ValueError("slope vector is not in the weight-0 kernel lattice")

    @property
    def m(self) -> int:
        return self.field.torsion_order

    @property
    def mn(self) -> int:
        return self.field.torsion_order * self.level

    @property
    def splitting(self) -> PrimeSplitting:
        return split_prime(self.field, self.p)

    def ords(self) -> dict[int, int]:
        """ord_w(pi^n) for each p-adic prime w."""
        sp = self.splitting
        return {w: a * self.level // sp.f for w, a in self.slope.as_dict().items()}

    def __mul__(self, other: WeilElement) -> WeilElement:
        if other.level != self.level or other.field != self.field or other.p != self.p:
            raise ValueError("Weil elements of different groups")
        explicit = None
        if self.explicit is not None and other.explicit is not None:
            explicit = self.explicit * other.explicit
        return WeilElement(
            self.field,
            self.p,
            self.level,
            self.torsion_exponent + other.torsion_exponent,
            self.slope + other.slope,
            explicit,
        )

    def inverse(self) -> WeilElement:
        explicit = self.explicit.inverse() if self.explicit is not None else None
        return WeilElement(self.field, self.p, self.level, -self.torsion_exponent, -self.slope, explicit)

    def galois(self, a: int) -> WeilElement:
        """Action on the K-data (slope, pi^n); the torsion exponent is left as is."""
        explicit = self.explicit.galois(a) if self.explicit is not None else None
        return WeilElement(self.field, self.p, self.level, self.torsion_exponent, self.slope.act(a), explicit)

    def is_identity(self) -> bool:
        return self.torsion_exponent == 0 and self.slope.is_zero()

    def to_json(self) -> dict:
        out = {
            "level": self.level,
            "torsion_exponent": self.torsion_exponent,
            "torsion_order": self.mn,
            "slope": self.slope.to_json(),
        }
        if self.explicit is not None:
            out["explicit"] = self.explicit.to_json()
        return out


def _k_element(x) -> Explicit:
    if isinstance(x, WeilElement):
        if x.explicit is None:
            raise ValueError("Weil element carries no explicit certificate")
        return x.explicit
    return x


def integrality_vector(x, q_exp: int, splitting: PrimeSplitting | None = None) -> tuple[list[Fraction], bool]:
    """n_w(x) = ord_w(x) / ord_w(q) * [K_w : Q_p] for q = p^q_exp, and whether all are integers.

    ``x`` is an :class:`Explicit` element of K or a :class:`WeilElement`
    (then its K-component pi^n is used, from the slope if no certificate).
    """
    if isinstance(x, WeilElement):
        sp = x.splitting
        ords = x.explicit.ords(sp) if x.explicit is not None else x.ords()
    else:
        sp = splitting or _splitting_for(x)
        ords = x.ords(sp)
    vec = [Fraction(ords[w] * sp.f, q_exp) for w in sp.X]
    return vec, all(v.denominator == 1 for v in vec)


def _splitting_for(x: Explicit) -> PrimeSplitting:
    from .cyclotomic import _split_prime

    return _split_prime(x.conductor, x.p)


def slope_of(x, q_exp: int, K: CyclotomicField | None = None) -> SlopeVector:
    vec, ok = integrality_vector(x, q_exp)
    if not ok:
        raise NotIntegral(f"slopes {[str(v) for v in vec]} are not all integral at q = p^{q_exp}")
    if K is None:
        K = x.field if isinstance(x, WeilElement) else CyclotomicField(x.conductor, 1)
    p = x.p
    return SlopeVector(K, p, tuple(int(v) for v in vec))


def kernel_basis(K: CyclotomicField, p: int) -> list[SlopeVector]:
    """e_w - e_{iota w} for each conjugation orbit of size 2 (w the smaller label)."""
    sp = split_prime(K, p)
    basis = []
    for w in sp.X:
        w_bar = sp.conjugation[w]
        if w < w_bar:
            basis.append(SlopeVector.from_dict(K, p, {w: 1, w_bar: -1}))
    return basis


def kernel_box(K: CyclotomicField, p: int, bound: int):
    """All kernel lattice points with |a_w| <= bound."""
    basis = kernel_basis(K, p)
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(basis)):
        s = SlopeVector.zero(K, p)
        for c, b in zip(coeffs, basis):
            s = s + b.scale(c)
        yield s


def infinity_type_for(s: SlopeVector) -> InfinityType:
    """chi with image s: n_{sigma_w} = s_w on the transversal sigma_w = label w, and iota sigma_w."""
    sp = s.splitting
    n = s.field.conductor
    d = s.as_dict()
    coeffs = {}
    for w in sp.X:
        if sp.conjugation[w] == w:
            if d[w]:
                raise ValueError("slope is nonzero at a self-conjugate prime")
            continue
        if w < sp.conjugation[w] and d[w]:
            coeffs[w] = d[w]
    for a in list(coeffs):
        coeffs[-a % n] = -coeffs[a]
    return InfinityType(s.field, tuple(sorted(coeffs.items())))


def construct_weil(s: SlopeVector, n: int, coeff_bound: int = 3, torsion: int = 0) -> WeilElement:
    """Explicit pi in W_0^K(p, n) whose n-th power has slope ``s``.

    pi^n = zeta_m^torsion * chi(varpi) where varpi generates the n/f_K power
    of the base prime w0 and chi is the weight-0 infinity type with image s.
    """
    K, p = s.field, s.p
    check_level(K, p, n)
    if not s.in_kernel():
        raise ValueError("slope vector is not in the kernel lattice")
    sp = s.splitting
    if s.is_zero():
        x = Explicit.one(K, p)
    else:
        chi = infinity_type_for(s)
        varpi = find_prime_generator(K, sp, 1, n // sp.f, coeff_bound)
        x = chi.apply(varpi, p)
    if torsion % K.torsion_order:
        x = Explicit(K.root_of_unity(torsion), p, 0) * x
    pi = WeilElement(K, p, n, torsion, s, x)
    if slope_of(x, n, K) != s or not x.is_weight_zero():
        raise ArithmeticError("constructed element failed its certificate check")
    return pi


def torsion_element(K: CyclotomicField, p: int, n: int, t: int = 1) -> WeilElement:
    """zeta_{mn}^t as a level-n element; its n-th power is zeta_m^t."""
    return WeilElement(K, p, n, t, SlopeVector.zero(K, p), Explicit(K.root_of_unity(t), p, 0))


def enumerate_weil(K: CyclotomicField, p: int, n: int, box: int, coeff_bound: int = 3):
    """Torsion-free representatives for every kernel point with |a_w| <= box."""
    check_level(K, p, n)
    for s in kernel_box(K, p, box):
        yield construct_weil(s, n, coeff_bound)


def torsion_order(K: CyclotomicField, p: int, n: int) -> int:
    """Order m*n of the torsion subgroup mu_{mn} of W_0^K(p, n)."""
    check_level(K, p, n)
    return K.torsion_order * n


def center_degree(pi: WeilElement) -> int:
    """[Q[pi^{mn}] : Q], the size of the Galois orbit of (slope, pi^{nm})."""
    x_m = pi.explicit ** pi.m if pi.explicit is not None else None
    orbit = set()
    for a in pi.field.galois_group:
        key = pi.slope.act(a).entries
        if x_m is not None:
            y = x_m.galois(a)
            key = (key, y.numerator.coeffs, y.k)
        orbit.add(key)
    return len(orbit)
