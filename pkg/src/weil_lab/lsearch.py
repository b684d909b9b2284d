"""Search for primes l whose cyclotomic field Q(zeta_l) contains a cyclic L of degree mn
with (p) inert in L and the local-norm conditions met at the primes above l.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, partial

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf

from ._parallel import ordered_map
from .brauer import cyclic_invariant_tame, cyclic_invariants_at_p, tate_invariants
from .cyclotomic import CyclotomicField, _cyclotomic_coeffs, describe_field
from .modmath import (
    is_rth_power_residue,
    multiplicative_order,
    prime_divisors,
    primes_up_to,
    totient,
)
from .weil import (
    Explicit,
    WeilElement,
    check_level,
    construct_weil,
    kernel_basis,
    slope_stabilizer,
    torsion_element,
)

__all__ = [
    "Candidate",
    "MissingCertificate",
    "SearchTask",
    "condition_b",
    "condition_c",
    "condition_c_oracle",
    "condition_d",
    "e15_check",
    "evaluate",
    "hits",
    "make_task",
    "probe_question",
    "search",
]

MODES = ("cd", "ab")


class MissingCertificate(ValueError):
    pass


@dataclass(frozen=True)
class SearchTask:
    field: CyclotomicField
    p: int
    n: int
    bound: int
    mode: str = "ab"
    generators: tuple[WeilElement, ...] = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        check_level(self.field, self.p, self.n)

    @property
    def mn(self) -> int:
        return self.field.torsion_order * self.n

    def echo(self) -> dict:
        return {
            "conductor": self.field.conductor,
            "p": self.p,
            "n": self.n,
            "mn": self.mn,
            "bound": self.bound,
            "mode": self.mode,
            "generators": [g.to_json() for g in self.generators],
        }


def make_task(
    conductor: int | CyclotomicField,
    p: int,
    n: int,
    bound: int,
    mode: str = "ab",
    coeff_bound: int = 3,
) -> SearchTask:
    """Task whose generators are explicit lifts of a kernel basis plus the torsion generator."""
    K = conductor if isinstance(conductor, CyclotomicField) else describe_field(conductor)
    check_level(K, p, n)
    gens = [construct_weil(s, n, coeff_bound) for s in kernel_basis(K, p)]
    gens.append(torsion_element(K, p, n))
    return SearchTask(K, p, n, bound, mode, tuple(gens))


@dataclass(frozen=True)
class Candidate:
    l: int
    passes_a: bool
    passes_b: str  # "true" | "false" | "undetermined" | "n/a" (no L when (c) fails)
    passes_c: bool
    passes_d: bool
    hit: bool
    certificate: tuple = field(default=(), compare=False)

    @property
    def L_description(self) -> str:
        return f"degree-mn subfield of Q(zeta_{self.l})" if self.passes_c else ""

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "passes_a": self.passes_a,
            "passes_b": self.passes_b,
            "passes_c": self.passes_c,
            "passes_d": self.passes_d,
            "hit": self.hit,
            "L": self.L_description,
            "certificate": list(self.certificate),
        }


def condition_c(l: int, p: int, mn: int) -> bool:
    """(Z/l)^x has a quotient of order mn generated by p."""
    if l == p or (l - 1) % mn:
        return False
    return all(pow(p, (l - 1) // r, l) != 1 for r in prime_divisors(mn)) if mn > 1 else True


def condition_c_oracle(l: int, p: int, mn: int) -> bool:
    """Independent check: order of p divided by gcd with (l-1)/mn equals mn."""
    if l == p or (l - 1) % mn:
        return False
    order = multiplicative_order(p, l)
    return order // math.gcd(order, (l - 1) // mn) == mn


@lru_cache(maxsize=4096)
def _primitive_root(l: int) -> int:
    factors = prime_divisors(l - 1)
    for g in range(2, l):
        if all(pow(g, (l - 1) // r, l) != 1 for r in factors):
            return g
    return 1  # l == 2


def _require_explicit(task: SearchTask) -> list[Explicit]:
    out = []
    for g in task.generators:
        if g.explicit is None:
            raise MissingCertificate("generator without an explicit representative")
        out.append(g.explicit)
    return out


def condition_d(l: int, task: SearchTask, certificate: list | None = None) -> bool:
    """Sufficient test that l splits in the field generated by W_0^K(p, n).

    l = 1 mod lcm(N, mn) splits K(zeta_mn); each generator pi^n must then be
    an n-th power mod every prime of K above l.
    """
    K = task.field
    N = K.conductor
    explicit = _require_explicit(task)
    if (N * task.mn * task.p) % l == 0:
        return False
    if (l - 1) % math.lcm(N, task.mn):
        return False
    if task.n == 1:
        return True
    r = pow(_primitive_root(l), (l - 1) // N, l)
    for idx, x in enumerate(explicit):
        for j in K.galois_group:
            res = x.residue_mod(pow(r, j, l), l)
            ok = is_rth_power_residue(res, task.n, l)
            if certificate is not None:
                certificate.append({"check": "d", "generator": idx, "prime": j, "residue": res, "nth_power": ok})
            if not ok:
                return False
    return True


@lru_cache(maxsize=256)
def _residue_field_root(N: int, l: int):
    """F_{l^f} = F_l[t]/g(t) with g an irreducible factor of Phi_N mod l; returns (g, mul, pow)."""
    phi = [int(c) for c in reversed(_cyclotomic_coeffs(N))]
    _, factors = gf_factor_sqf(phi, l, ZZ)
    g = sorted([[int(c) for c in f] for f in factors], key=lambda f: (len(f), f))[0]
    g = list(reversed(g))  # low-first, monic
    deg = len(g) - 1

    def reduce(v):
        v = list(v)
        for i in range(len(v) - 1, deg - 1, -1):
            c = v[i] % l
            if c:
                for k in range(deg + 1):
                    v[i - deg + k] -= c * g[k]
        return tuple(x % l for x in (v[:deg] + [0] * (deg - len(v))))

    def mul(a, b):
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        return reduce(prod)

    def power(a, e):
        result = reduce([1])
        while e:
            if e & 1:
                result = mul(result, a)
            a = mul(a, a)
            e >>= 1
        return result

    t = reduce([0, 1]) if deg > 1 else reduce([(-g[0]) % l])
    return t, mul, power, reduce


def _residues(x: Explicit, m: int, l: int, reps) -> dict[int, int]:
    """Residues in F_l of x^m at the primes w_j of K above l (x^m must be fixed by D_l)."""
    N = x.conductor
    t, mul, power, reduce = _residue_field_root(N, l)
    p_inv = pow(x.p, -x.k, l)
    out = {}
    for j in reps:
        base = power(t, j)
        acc = reduce([0])
        for c in reversed(x.numerator.coeffs):
            acc = reduce([a + (c if i == 0 else 0) for i, a in enumerate(mul(acc, base))])
        val = power(acc, m)
        if any(val[1:]):
            raise ArithmeticError("residue is not rational; x^m is not fixed by the decomposition group")
        out[j] = val[0] * pow(p_inv, m, l) % l
    return out


def condition_b(l: int, task: SearchTask, certificate: list | None = None) -> str:
    """pi^{mn} is a local norm from L at every prime of Q[pi^{mn}] above l.

    Decided only at places of residue degree 1, where it means the residue of
    pi^{mn} is an mn-th power mod l; elsewhere the verdict is "undetermined".
    """
    if not condition_c(l, task.p, task.mn):
        raise ValueError(f"condition (c) fails at l={l}; L is not defined")
    explicit = _require_explicit(task)
    K = task.field
    N = K.conductor
    verdict = "true"
    for idx, (pi, x) in enumerate(zip(task.generators, explicit)):
        x_m = x ** pi.m
        if x_m.is_one():
            continue
        if N % l == 0:
            verdict = "undetermined"
            if certificate is not None:
                certificate.append({"check": "b", "generator": idx, "note": "l ramifies in K"})
            continue
        H = slope_stabilizer(pi.slope)
        t, lt = 1, l % N
        while lt not in H:
            lt = lt * l % N
            t += 1
        if t > 1:
            verdict = "undetermined"
            if certificate is not None:
                certificate.append({"check": "b", "generator": idx, "residue_degree": t})
            continue
        reps = sorted({min(a * h % N for h in H) for a in K.galois_group})
        for j, res in _residues(x, pi.m, l, reps).items():
            ok = is_rth_power_residue(res, task.mn, l)
            if certificate is not None:
                certificate.append(
                    {"check": "b", "generator": idx, "place": j, "residue": res, "mn_th_power": ok}
                )
            if not ok:
                return "false"
    return verdict


def evaluate(l: int, task: SearchTask) -> Candidate:
    cert: list = []
    c = condition_c(l, task.p, task.mn)
    d = condition_d(l, task, cert)
    b = condition_b(l, task, cert) if c else "n/a"
    a = c  # for L inside Q(zeta_l), p inert in L iff p generates Gal(L/Q)
    hit = (c and d) if task.mode == "cd" else (a and b == "true")
    return Candidate(l, a, b, c, d, hit, tuple(cert))


def search(task: SearchTask, parallel: int = 1) -> list[Candidate]:
    """Verdicts for every prime l <= bound other than p, ascending in l."""
    ls = [l for l in primes_up_to(task.bound) if l != task.p]
    return ordered_map(partial(_evaluate_for, task), ls, parallel)


def _evaluate_for(task: SearchTask, l: int) -> Candidate:
    return evaluate(l, task)


def hits(candidates) -> list[Candidate]:
    return [c for c in candidates if c.hit]


def e15_check(task: SearchTask, l: int) -> dict:
    """Compare cyclic-algebra invariants of B(L (x) Q[pi^{mn}], Frob_p, pi^{mn}) with Tate's.

    At v | p the two routes must agree entry by entry; at the places above l of
    residue degree 1 the cyclic invariant must vanish.
    """
    if not condition_c(l, task.p, task.mn):
        raise ValueError(f"l={l} does not define L")
    explicit = _require_explicit(task)
    N = task.field.conductor
    rows, ok = [], True
    for idx, (pi, x) in enumerate(zip(task.generators, explicit)):
        tate = tate_invariants(pi).entries
        cyclic = cyclic_invariants_at_p(pi)
        at_p = all(tate[v] == cyclic[v] for v in tate)
        at_l = {}
        x_m = x ** pi.m
        H = slope_stabilizer(pi.slope)
        if not x_m.is_one() and N % l and (l % N) in H:
            reps = sorted({min(a * h % N for h in H) for a in task.field.galois_group})
            for j, res in _residues(x, pi.m, l, reps).items():
                at_l[j] = cyclic_invariant_tame(res, l, task.mn, task.p)
        ok = ok and at_p and all(v == 0 for v in at_l.values())
        rows.append(
            {
                "generator": idx,
                "tate_at_p": {str(v): _fs(q) for v, q in sorted(tate.items())},
                "cyclic_at_p": {str(v): _fs(q) for v, q in sorted(cyclic.items())},
                "cyclic_at_l": {str(v): _fs(q) for v, q in sorted(at_l.items())},
                "agree": at_p and all(v == 0 for v in at_l.values()),
            }
        )
    return {"l": l, "ok": ok, "generators": rows}


def _fs(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def probe_question(grid, parallel: int = 1, coeff_bound: int = 3) -> list[dict]:
    """For each (conductor, p, n, bound): smallest full (a)+(b) hit and hit density.

    Density is measured among primes l = 1 mod lcm(N, mn) and reported next to
    the naive 1/phi(mn). No row ever claims that L does not exist.
    """
    from .weil import DivisibilityError
    from .cyclotomic import UnsupportedConductor

    report = []
    for conductor, p, n, bound in grid:
        row = {"conductor": conductor, "p": p, "n": n, "bound": bound}
        try:
            task = make_task(conductor, p, n, bound, "ab", coeff_bound)
        except (DivisibilityError, UnsupportedConductor) as exc:
            row["error"] = type(exc).__name__
            row["detail"] = str(exc)
            report.append(row)
            continue
        cands = search(task, parallel)
        found = hits(cands)
        modulus = math.lcm(conductor, task.mn)
        eligible = [c for c in cands if (c.l - 1) % modulus == 0]
        eligible_hits = [c for c in found if (c.l - 1) % modulus == 0]
        row.update(
            {
                "mn": task.mn,
                "smallest_hit": found[0].l if found else None,
                "status": "hit" if found else "none below bound",
                "hits": [c.l for c in found],
                "eligible": len(eligible),
                "density": _fs(Fraction(len(eligible_hits), len(eligible))) if eligible else None,
                "heuristic": _fs(Fraction(1, totient(task.mn))),
            }
        )
        report.append(row)
    return report
