"""Exact integer arithmetic: primality, factoring small numbers, orders, power residues.

Rationals are :class:`fractions.Fraction` throughout; no floats are used for
anything that ends up in a result.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "BadModulus",
    "NotCoprime",
    "DETERMINISTIC_BOUND",
    "ResidueClass",
    "factorize",
    "frac_mod1",
    "is_prime",
    "is_rth_power_residue",
    "multiplicative_order",
    "prime_divisors",
    "primality",
    "primes_up_to",
    "totient",
    "valuation",
]

# Miller-Rabin with the first 13 prime bases (2..41) is proven correct below
# this bound (Sorenson & Webster); it covers all of 2**64. Twelve bases are not
# enough: 318665857834031151167461 fools all of 2..37.
DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
PROBABLE_ROUNDS = 64


class NotCoprime(ValueError):
    pass


class BadModulus(ValueError):
    pass


@dataclass(frozen=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise BadModulus(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __add__(self, other: ResidueClass) -> ResidueClass:
        self._check(other)
        return ResidueClass(self.value + other.value, self.modulus)

    def __mul__(self, other: ResidueClass) -> ResidueClass:
        self._check(other)
        return ResidueClass(self.value * other.value, self.modulus)

    def __neg__(self) -> ResidueClass:
        return ResidueClass(-self.value, self.modulus)

    def __pow__(self, e: int) -> ResidueClass:
        return ResidueClass(pow(self.value, e, self.modulus), self.modulus)

    def _check(self, other):
        if other.modulus != self.modulus:
            raise BadModulus("residue classes with different moduli")


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primality(n: int) -> str:
    """Return ``"prime"``, ``"composite"`` or ``"probable prime"``.

    Below :data:`DETERMINISTIC_BOUND` the answer is proven. Above it a
    Miller-Rabin test with 64 pseudo-random bases (seeded by ``n`` so the
    verdict is reproducible) is used and a pass is labelled as probable.
    """
    if n < 2:
        return "composite"
    for p in _MR_BASES:
        if n == p:
            return "prime"
        if n % p == 0:
            return "composite"
    if n < DETERMINISTIC_BOUND:
        return "prime" if _miller_rabin(n, _MR_BASES) else "composite"
    rng = random.Random(n)
    bases = [rng.randrange(2, n - 1) for _ in range(PROBABLE_ROUNDS)]
    return "probable prime" if _miller_rabin(n, bases) else "composite"


def is_prime(n: int) -> bool:
    return primality(n) != "composite"


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, bound + 1, i)))
    return [i for i in range(bound + 1) if sieve[i]]


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization of ``n >= 1`` as ``((p, e), ...)``."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def totient(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def multiplicative_order(a: int, modulus: int) -> int:
    if modulus < 2:
        raise BadModulus(f"modulus must be >= 2, got {modulus}")
    a %= modulus
    if math.gcd(a, modulus) != 1:
        raise NotCoprime(f"gcd({a}, {modulus}) != 1")
    order = totient(modulus)
    for r, e in factorize(order):
        for _ in range(e):
            if pow(a, order // r, modulus) == 1:
                order //= r
            else:
                break
    return order


def is_rth_power_residue(a: int, r: int, l: int) -> bool:
    """True iff ``a`` is an r-th power in (Z/lZ)^x, for prime ``l`` with ``r | l-1``."""
    if r < 1 or (l - 1) % r:
        raise BadModulus(f"{r} does not divide {l} - 1")
    if a % l == 0:
        raise BadModulus(f"{l} divides {a}")
    return pow(a, (l - 1) // r, l) == 1


def frac_mod1(x: Fraction) -> Fraction:
    """Representative of ``x`` in [0, 1)."""
    return x - math.floor(x)
