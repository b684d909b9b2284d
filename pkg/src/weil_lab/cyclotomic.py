"""Cyclotomic CM fields Q(zeta_N): Galois group, splitting of p, ring arithmetic, valuations.

Galois elements are integers ``a`` in (Z/NZ)^x acting by zeta -> zeta^a.  The
p-adic primes of K are labelled by cosets of the decomposition group D of p in
(Z/NZ)^x, using the smallest representative; the prime with label ``a`` is
``sigma_a(w0)`` for a fixed base prime ``w0``.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from sympy import cyclotomic_poly
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf

from .modmath import is_prime, multiplicative_order, totient, valuation

__all__ = [
    "CyclotomicField",
    "NotFound",
    "PrimeSplitting",
    "RingElement",
    "UnsupportedConductor",
    "describe_field",
    "element_norm",
    "find_prime_generator",
    "load_class_numbers",
    "split_prime",
    "valuation_vector",
]

FIELD_TABLE_ENV = "WEIL_LAB_FIELD_TABLE"


class UnsupportedConductor(ValueError):
    pass


class NotFound(LookupError):
    pass


def load_class_numbers(path: str | os.PathLike | None = None) -> dict[int, int]:
    """Read a ``conductor class_number`` table; ``#`` starts a comment.

    Without a path, ``$WEIL_LAB_FIELD_TABLE`` is used if set, else the
    embedded table.
    """
    if path is None:
        path = os.environ.get(FIELD_TABLE_ENV) or None
    if path is None:
        text = resources.files("weil_lab").joinpath("data/class_numbers.txt").read_text()
    else:
        text = Path(path).read_text()
    table = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'conductor class_number'")
        table[int(parts[0])] = int(parts[1])
    return table


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    return tuple(int(c) for c in reversed(cyclotomic_poly(n, polys=True).all_coeffs()))


@dataclass(frozen=True)
class CyclotomicField:
    conductor: int
    class_number: int

    @property
    def degree(self) -> int:
        return totient(self.conductor)

    @property
    def torsion_order(self) -> int:
        """|mu(K)|."""
        n = self.conductor
        return n if n % 2 == 0 else 2 * n

    @property
    def real_subfield_degree(self) -> int:
        return self.degree // 2

    @property
    def galois_group(self) -> tuple[int, ...]:
        return _units(self.conductor)

    @property
    def modulus(self) -> tuple[int, ...]:
        return _cyclotomic_coeffs(self.conductor)

    def zeta(self) -> RingElement:
        return RingElement.monomial(self.conductor, 1)

    def root_of_unity(self, t: int) -> RingElement:
        """zeta_m^t where m = |mu(K)|; zeta_{2N} = -zeta_N^{(N+1)/2} for odd N."""
        n = self.conductor
        t %= self.torsion_order
        if n % 2 == 0:
            return RingElement.monomial(n, t)
        e = (n + 1) // 2 * t
        sign = -1 if t % 2 else 1
        return RingElement.monomial(n, e) * sign

    def one(self) -> RingElement:
        return RingElement.constant(self.conductor, 1)

    def element(self, coeffs) -> RingElement:
        return RingElement.from_coeffs(self.conductor, coeffs)

    def to_dict(self) -> dict:
        return {
            "conductor": self.conductor,
            "degree": self.degree,
            "torsion_order": self.torsion_order,
            "class_number": self.class_number,
            "real_subfield_degree": self.real_subfield_degree,
        }


@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(a for a in range(1, n) if math.gcd(a, n) == 1) if n > 1 else (0,)


def describe_field(conductor: int, class_number: int | None = None, table=None) -> CyclotomicField:
    """Build Q(zeta_N) for a canonical conductor N >= 3.

    ``class_number`` overrides the table lookup; ``table`` is a mapping
    ``conductor -> h`` or a path to a table file.
    """
    if conductor < 3 or conductor % 4 == 2:
        raise UnsupportedConductor(f"conductor {conductor} is not canonical (need N >= 3, N != 2 mod 4)")
    if class_number is None:
        if table is None or isinstance(table, (str, os.PathLike)):
            table = load_class_numbers(table)
        if conductor not in table:
            raise UnsupportedConductor(f"class number of Q(zeta_{conductor}) not in table")
        class_number = table[conductor]
    if class_number < 1:
        raise ValueError("class number must be positive")
    return CyclotomicField(conductor, class_number)


@dataclass(frozen=True)
class PrimeSplitting:
    conductor: int
    p: int
    e: int
    f: int
    g: int
    X: tuple[int, ...]
    conjugation: dict[int, int] = field(hash=False, compare=False)
    Y: tuple[int, ...] = ()
    fiber: dict[int, int] = field(default_factory=dict, hash=False, compare=False)
    decomposition_group: frozenset[int] = frozenset()
    inertia_group: frozenset[int] = frozenset()
    label_of: dict[int, int] = field(default_factory=dict, hash=False, compare=False, repr=False)

    @property
    def p_power_part(self) -> int:
        return self.conductor // self.prime_to_p_part

    @property
    def prime_to_p_part(self) -> int:
        n = self.conductor
        while n % self.p == 0:
            n //= self.p
        return n

    def act(self, a: int, label: int) -> int:
        """Label of sigma_a(w_label)."""
        return self.label_of[a * label % self.conductor]

    def fiber_sets(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {y: [] for y in self.Y}
        for w in self.X:
            out[self.fiber[w]].append(w)
        return {y: tuple(ws) for y, ws in out.items()}

    def to_dict(self) -> dict:
        return {
            "conductor": self.conductor,
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "g": self.g,
            "X": list(self.X),
            "conjugation": {str(w): self.conjugation[w] for w in self.X},
            "Y": list(self.Y),
            "fiber": {str(w): self.fiber[w] for w in self.X},
        }


def split_prime(K: CyclotomicField, p: int) -> PrimeSplitting:
    return _split_prime(K.conductor, p)


@lru_cache(maxsize=None)
def _split_prime(n: int, p: int) -> PrimeSplitting:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n_prime = n
    k = 0
    while n_prime % p == 0:
        n_prime //= p
        k += 1
    e = totient(p**k)
    f = multiplicative_order(p, n_prime) if n_prime > 1 else 1
    group = _units(n)
    p_res = p % n_prime if n_prime > 1 else 0
    powers = {pow(p_res, i, n_prime) for i in range(f)} if n_prime > 1 else {0}
    decomposition = frozenset(a for a in group if (a % n_prime if n_prime > 1 else 0) in powers)
    inertia = frozenset(a for a in group if n_prime == 1 or a % n_prime == 1)
    label_of = {}
    for a in group:
        if a in label_of:
            continue
        coset = [a * d % n for d in decomposition]
        rep = min(coset)
        for b in coset:
            label_of[b] = rep
    X = tuple(sorted(set(label_of.values())))
    conj = {w: label_of[(n - w) % n] for w in X}
    fiber = {w: min(w, conj[w]) for w in X}
    Y = tuple(sorted(set(fiber.values())))
    g = len(X)
    assert e * f * g == totient(n)
    return PrimeSplitting(n, p, e, f, g, X, conj, Y, fiber, decomposition, inertia, label_of)


# ---------------------------------------------------------------------------
# exact arithmetic in Z[zeta_N]


def _reduce(vec: list[int], n: int) -> tuple[int, ...]:
    mod = _cyclotomic_coeffs(n)
    d = len(mod) - 1
    vec = list(vec)
    for i in range(len(vec) - 1, d - 1, -1):
        c = vec[i]
        if c:
            vec[i] = 0
            base = i - d
            for j in range(d):
                vec[base + j] -= c * mod[j]
    vec = vec[:d] + [0] * (d - len(vec))
    return tuple(vec)


@dataclass(frozen=True)
class RingElement:
    """Element of Z[zeta_N] in the power basis 1, zeta, ..., zeta^(phi(N)-1)."""

    conductor: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_coeffs(cls, n: int, coeffs) -> RingElement:
        return cls(n, _reduce([int(c) for c in coeffs], n))

    @classmethod
    def constant(cls, n: int, c: int) -> RingElement:
        return cls.from_coeffs(n, [c])

    @classmethod
    def monomial(cls, n: int, e: int) -> RingElement:
        e %= n
        vec = [0] * (e + 1)
        vec[e] = 1
        return cls.from_coeffs(n, vec)

    def _coerce(self, other) -> RingElement:
        if isinstance(other, RingElement):
            if other.conductor != self.conductor:
                raise ValueError("elements of different cyclotomic fields")
            return other
        if isinstance(other, int):
            return RingElement.constant(self.conductor, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RingElement(self.conductor, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.conductor, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.conductor, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return RingElement(self.conductor, _reduce(prod, self.conductor))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> RingElement:
        if e < 0:
            raise ValueError("negative powers are not integral")
        result = RingElement.constant(self.conductor, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def galois(self, a: int) -> RingElement:
        """sigma_a: zeta -> zeta^a."""
        n = self.conductor
        vec = [0] * n
        for i, c in enumerate(self.coeffs):
            vec[i * a % n] += c
        return RingElement(n, _reduce(vec, n))

    def conj(self) -> RingElement:
        return self.galois(-1 % self.conductor)

    def content_valuation(self, p: int) -> int:
        """Largest k with p^k dividing every coefficient (the power basis is integral)."""
        vals = [valuation(c, p) for c in self.coeffs if c]
        if not vals:
            raise ValueError("zero element")
        return min(vals)

    def exact_div(self, d: int) -> RingElement:
        if any(c % d for c in self.coeffs):
            raise ValueError(f"{d} does not divide element")
        return RingElement(self.conductor, tuple(c // d for c in self.coeffs))

    def evaluate_mod(self, root: int, modulus: int) -> int:
        """Image under zeta -> root in Z/modulus."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * root + c) % modulus
        return acc

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def element_norm(x: RingElement) -> Fraction:
    """N_{K/Q}(x) as the product of all Galois conjugates (the resultant with Phi_N)."""
    if x.is_zero():
        raise ValueError("norm of zero")
    prod = x
    for a in _units(x.conductor)[1:]:
        prod = prod * x.galois(a)
    assert prod.is_rational()
    return Fraction(prod.coeffs[0])


# ---------------------------------------------------------------------------
# p-adic valuations via an explicit embedding of K into K_{w0}


class _LocalRing:
    """(Z/p^M)[t, z] / (G(t), E(z)) modelling O_{K_w0} to p-adic precision M.

    G lifts an irreducible factor of Phi_{N'} mod p (unramified part); E(z) =
    Phi_{p^k}(1 - z) is Eisenstein, so z is a uniformizer and 1, z, ..., z^{e-1}
    is an integral basis over the unramified ring.
    """

    def __init__(self, n: int, p: int, precision: int):
        self.p = p
        self.M = precision
        self.mod = p**precision
        n_prime, k = n, 0
        while n_prime % p == 0:
            n_prime //= p
            k += 1
        self.n = n
        if n_prime > 1:
            phi = [int(c) for c in reversed(_cyclotomic_coeffs(n_prime))]
            _, factors = gf_factor_sqf(phi, p, ZZ)
            factors = sorted([[int(c) for c in fac] for fac in factors], key=lambda f: (len(f), f))
            g = list(reversed(factors[0]))  # low-first, monic
        else:
            g = [-1, 1]
        self.G = g
        self.f = len(g) - 1
        if k:
            self.E = self._eisenstein(p**k)
        else:
            self.E = [0, 1]  # z = 0: no ramified part
        self.e = len(self.E) - 1
        t = self._unr([0, 1]) if self.f > 1 else self._unr([(-g[0]) % self.mod])
        q = p**self.f
        theta = self._unr_pow(t, q**self.M)
        s = pow(p**k, -1, n_prime) if n_prime > 1 else 0
        u = pow(n_prime, -1, p**k) if k else 0
        # zeta_N = zeta_{N'}^s * zeta_{p^k}^u with s*p^k = 1 mod N', u*N' = 1 mod p^k
        theta_part = self._embed_unr(self._unr_pow(theta, s))
        one_minus_z = self._sum(self._one(), self._neg(self._z())) if k else self._one()
        self.zeta_image = self._mul(theta_part, self._pow(one_minus_z, u)) if k else theta_part

    @staticmethod
    def _eisenstein(pk: int) -> list[int]:
        phi = _cyclotomic_coeffs(pk)  # low-first in x
        # substitute x = 1 - z
        out = [0] * len(phi)
        for i, c in enumerate(phi):
            for j in range(i + 1):
                out[j] += c * math.comb(i, j) * (-1) ** j
        return out

    # unramified ring (Z/p^M)[t]/G, elements are length-f lists
    def _unr(self, coeffs):
        v = [c % self.mod for c in coeffs] + [0] * (self.f - len(coeffs))
        return self._unr_reduce(v)

    def _unr_reduce(self, v):
        g, f, mod = self.G, self.f, self.mod
        v = list(v)
        for i in range(len(v) - 1, f - 1, -1):
            c = v[i]
            if c:
                v[i] = 0
                for j in range(f):
                    v[i - f + j] = (v[i - f + j] - c * g[j]) % mod
        return [x % mod for x in v[:f]] + [0] * (f - len(v[:f]))

    def _unr_mul(self, a, b):
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._unr_reduce(prod)

    def _unr_pow(self, a, e):
        result = self._unr([1])
        while e:
            if e & 1:
                result = self._unr_mul(result, a)
            a = self._unr_mul(a, a)
            e >>= 1
        return result

    # full ring: length-e lists of unramified elements
    def _zero_unr(self):
        return [0] * self.f

    def _one(self):
        return [self._unr([1])] + [self._zero_unr() for _ in range(self.e - 1)]

    def _z(self):
        out = [self._zero_unr() for _ in range(self.e)]
        out[1 % self.e] = self._unr([1]) if self.e > 1 else self._unr([0])
        return out

    def _embed_unr(self, a):
        return [a] + [self._zero_unr() for _ in range(self.e - 1)]

    def _sum(self, a, b):
        return [[(x + y) % self.mod for x, y in zip(u, v)] for u, v in zip(a, b)]

    def _neg(self, a):
        return [[(-x) % self.mod for x in u] for u in a]

    def _mul(self, a, b):
        e = self.e
        prod = [self._zero_unr() for _ in range(2 * e - 1)]
        for i, x in enumerate(a):
            if any(x):
                for j, y in enumerate(b):
                    if any(y):
                        xy = self._unr_mul(x, y)
                        prod[i + j] = [(s + t) % self.mod for s, t in zip(prod[i + j], xy)]
        E = self.E
        for i in range(len(prod) - 1, e - 1, -1):
            c = prod[i]
            if any(c):
                prod[i] = self._zero_unr()
                for j in range(e):
                    if E[j]:
                        prod[i - e + j] = [(s - E[j] * t) % self.mod for s, t in zip(prod[i - e + j], c)]
        return prod[:e]

    def _pow(self, a, k):
        result = self._one()
        while k:
            if k & 1:
                result = self._mul(result, a)
            a = self._mul(a, a)
            k >>= 1
        return result

    def image(self, x: RingElement, a: int = 1):
        """Image of sigma_a^{-1}(x) in the local ring."""
        a_inv = pow(a, -1, self.n)
        base = self._pow(self.zeta_image, a_inv)
        acc = [self._zero_unr() for _ in range(self.e)]
        for c in reversed(x.coeffs):
            acc = self._mul(acc, base)
            acc[0] = [(acc[0][0] + c) % self.mod] + acc[0][1:]
        return acc

    def valuation(self, elt) -> int:
        best = None
        for j, coeff in enumerate(elt):
            v = min((valuation(c, self.p) if c else self.M) for c in coeff)
            cand = self.e * v + j
            best = cand if best is None else min(best, cand)
        if best >= self.e * self.M:
            raise ArithmeticError("p-adic precision exhausted")
        return best


@lru_cache(maxsize=64)
def _local_ring(n: int, p: int, precision: int) -> _LocalRing:
    return _LocalRing(n, p, precision)


def valuation_vector(x: RingElement, splitting: PrimeSplitting) -> dict[int, int]:
    """ord_w(x) for every p-adic prime w (labels of ``splitting.X``), ord_w normalized onto Z."""
    p = splitting.p
    if x.is_zero():
        raise ValueError("valuation of zero")
    norm = element_norm(x)
    bound = valuation(abs(norm.numerator), p) // splitting.f
    precision = max(2, bound // splitting.e + 2)
    # round up so the cache is reused across nearby bounds
    precision = 1 << (precision - 1).bit_length()
    ring = _local_ring(x.conductor, p, precision)
    return {w: ring.valuation(ring.image(x, w)) for w in splitting.X}


def _box(dim: int, bound: int):
    for b in range(0, bound + 1):
        for vec in itertools.product(range(-b, b + 1), repeat=dim):
            if max(map(abs, vec), default=0) == b:
                yield vec


def find_prime_generator(
    K: CyclotomicField,
    splitting: PrimeSplitting,
    w: int,
    exponent: int = 1,
    coeff_bound: int = 3,
) -> RingElement:
    """Find varpi in O_K with ord_w(varpi) = exponent and no other prime divisors.

    Coefficient vectors are scanned in shells of growing sup-norm up to
    ``coeff_bound``; a generator of sigma(w) for any other p-adic prime is
    transported back to ``w`` by the Galois action.  Raises :class:`NotFound`
    when the box is exhausted.
    """
    if w not in splitting.X:
        raise ValueError(f"{w} is not a p-adic prime label")
    if coeff_bound < 1 or exponent < 1:
        raise ValueError("coeff_bound and exponent must be >= 1")
    if exponent > 1 and exponent % K.class_number == 0:
        # powers of a generator of w itself are cheaper than a larger search
        try:
            base = find_prime_generator(K, splitting, w, K.class_number, coeff_bound)
            return base ** (exponent // K.class_number)
        except NotFound:
            pass
    n = K.conductor
    target = splitting.p ** (splitting.f * exponent)
    for vec in _box(K.degree, coeff_bound):
        x = RingElement(n, tuple(vec))
        if x.is_zero() or abs(element_norm(x)) != target:
            continue
        vals = valuation_vector(x, splitting)
        hits = [u for u, v in vals.items() if v == exponent]
        if not hits:
            continue
        # move the hit prime u to w: sigma_c(w_u) = w_{c u}
        u = hits[0]
        c = next(a for a in K.galois_group if splitting.act(a, u) == w)
        return x.galois(c)
    raise NotFound(f"no generator of w={w}^{exponent} with coefficients bounded by {coeff_bound}")
