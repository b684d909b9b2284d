"""Generalized Artin primitive-root sets and Wieferich scans."""
from __future__ import annotations

from dataclasses import dataclass
from functools import partial

from ._parallel import ordered_map
from .modmath import factorize, prime_divisors, primes_up_to, totient

__all__ = [
    "AbelianField",
    "MTask",
    "enumerate_M",
    "is_member",
    "power_obstruction",
    "wieferich_search",
]


@dataclass(frozen=True)
class AbelianField:
    """Subfield of Q(zeta_C) fixed by ``subgroup`` of (Z/CZ)^x.

    A prime p not dividing C splits completely iff p mod C lies in the subgroup.
    """

    conductor: int = 1
    subgroup: frozenset[int] = frozenset({1})

    @classmethod
    def rationals(cls) -> AbelianField:
        return cls(1, frozenset({0}))

    @classmethod
    def cyclotomic(cls, conductor: int) -> AbelianField:
        if conductor <= 2:
            return cls.rationals()
        return cls(conductor, frozenset({1}))

    @classmethod
    def real_cyclotomic(cls, conductor: int) -> AbelianField:
        return cls(conductor, frozenset({1, conductor - 1}))

    @property
    def degree(self) -> int:
        if self.conductor <= 2:
            return 1
        return totient(self.conductor) // len(self.subgroup)

    def splits(self, p: int) -> bool:
        if self.conductor <= 2:
            return True
        if self.conductor % p == 0:
            return False
        return p % self.conductor in self.subgroup

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "subgroup": sorted(self.subgroup), "degree": self.degree}


def _squarefree(a: int) -> bool:
    return a != 0 and all(e == 1 for _, e in factorize(abs(a)))


@dataclass(frozen=True)
class MTask:
    a: int
    n: int
    field: AbelianField = AbelianField.rationals()
    bound: int = 1000
    k: int | None = 1

    def __post_init__(self):
        if self.a in (-1, 1) or not _squarefree(self.a):
            raise ValueError(f"a={self.a} must be square-free and different from +-1")
        if self.n < 1:
            raise ValueError("n must be positive")

    def echo(self) -> dict:
        return {"a": self.a, "n": self.n, "F": self.field.to_json(), "bound": self.bound, "k": self.k}


def is_member(p: int, task: MTask) -> bool:
    """p does not divide a, p splits in F, a generates a quotient of order n, and [(Z/p)^x : <a>] divides k.

    ``k=None`` drops the index condition.
    """
    a, n = task.a, task.n
    if a % p == 0 or not task.field.splits(p):
        return False
    if (p - 1) % n:
        return False
    if any(pow(a, (p - 1) // r, p) == 1 for r in prime_divisors(n)):
        return False
    if task.k is not None and task.k % _index(a % p, p):
        return False
    return True


def _index(a: int, p: int) -> int:
    """Index of the subgroup generated by a in (Z/p)^x."""
    order = p - 1
    for r, e in factorize(p - 1):
        for _ in range(e):
            if pow(a, order // r, p) == 1:
                order //= r
            else:
                break
    return (p - 1) // order


def enumerate_M(task: MTask, parallel: int = 1) -> list[int]:
    primes = primes_up_to(task.bound)
    flags = ordered_map(partial(_is_member_for, task), primes, parallel)
    return [p for p, ok in zip(primes, flags) if ok]


def _is_member_for(task: MTask, p: int) -> bool:
    return is_member(p, task)


def power_obstruction(a: int, F: AbelianField) -> dict:
    """Conservative N such that a being an m-th power in F*Q^ab forces m | N.

    Returned as ``2 * [F:Q]``; odd m are controlled by the degree alone and
    the factor 2 covers the even case (a is a square in Q(zeta_{4|a|})).
    """
    if a in (-1, 1) or not _squarefree(a):
        raise ValueError(f"a={a} must be square-free and different from +-1")
    return {"a": a, "F": F.to_json(), "N": 2 * F.degree, "conservative": True}


def wieferich_search(p: int, bound: int, parallel: int = 1) -> list[int]:
    """Primes l <= bound, l != p, with p^(l-1) = 1 mod l^2."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    ls = [l for l in primes_up_to(bound) if l != p]
    flags = ordered_map(partial(_wieferich, p), ls, parallel)
    return [l for l, ok in zip(ls, flags) if ok]


def _wieferich(p: int, l: int) -> bool:
    return pow(p, l - 1, l * l) == 1


def heuristic_count(bound: int, p: int = 2) -> float:
    """Expected number of Wieferich primes up to bound under the 1/l heuristic (log log bound)."""
    return sum(1 / l for l in primes_up_to(bound) if l != p)

