import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF, Poly, cyclotomic_poly, symbols

from weil_lab.cyclotomic import (
    CyclotomicField,
    NotFound,
    RingElement,
    UnsupportedConductor,
    describe_field,
    element_norm,
    find_prime_generator,
    load_class_numbers,
    split_prime,
    valuation_vector,
)
from weil_lab.modmath import multiplicative_order, primes_up_to, totient, valuation

t = symbols("t")
CANONICAL = [n for n in range(3, 61) if n % 4 != 2]
TABLE = load_class_numbers()


def test_describe_field_examples():
    K = describe_field(4)
    assert (K.degree, K.torsion_order, K.class_number) == (2, 4, 1)
    K = describe_field(3)
    assert (K.degree, K.torsion_order, K.class_number) == (2, 6, 1)
    with pytest.raises(UnsupportedConductor):
        describe_field(6)
    with pytest.raises(UnsupportedConductor):
        describe_field(2)


def test_unknown_class_number_rejected_without_override():
    n = max(TABLE) + 4 if (max(TABLE) + 4) % 4 != 2 else max(TABLE) + 5
    with pytest.raises(UnsupportedConductor):
        describe_field(n)
    assert describe_field(n, class_number=7).class_number == 7


def _minkowski_bound(n: int) -> float:
    # (4/pi)^{r2} d!/d^d sqrt|disc| for a totally complex field of degree d
    K = CyclotomicField(n, 1)
    d = K.degree
    disc = abs(_discriminant(n))
    return (4 / math.pi) ** (d // 2) * math.factorial(d) / d**d * math.sqrt(disc)


def _discriminant(n: int) -> int:
    poly = Poly(cyclotomic_poly(n, t), t)
    return int(poly.discriminant())


@pytest.mark.parametrize("n", [3, 4])
def test_class_number_one_by_minkowski(n):
    # every class contains an integral ideal of norm below the bound; below 2 only (1) qualifies
    assert _minkowski_bound(n) < 2
    assert TABLE[n] == 1


def test_field_table_env_override(tmp_path, monkeypatch):
    path = tmp_path / "table.txt"
    path.write_text("# custom\n4 1\n23 3\n")
    monkeypatch.setenv("WEIL_LAB_FIELD_TABLE", str(path))
    assert load_class_numbers() == {4: 1, 23: 3}
    with pytest.raises(UnsupportedConductor):
        describe_field(5, table=load_class_numbers())


def test_torsion_order_rule():
    for n in CANONICAL:
        K = CyclotomicField(n, 1)
        assert K.torsion_order == (n if n % 2 == 0 else 2 * n)
        assert K.degree == totient(n)


def test_root_of_unity_has_exact_order():
    for n in (3, 4, 5, 9, 12, 15):
        K = CyclotomicField(n, 1)
        m = K.torsion_order
        z = K.root_of_unity(1)
        powers = [z**k for k in range(1, m + 1)]
        assert powers[-1] == K.one()
        assert all(x != K.one() for x in powers[:-1])


@pytest.mark.parametrize(
    "n,p,efg",
    [(4, 5, (1, 1, 2)), (4, 3, (1, 2, 1)), (4, 2, (2, 1, 1))],
)
def test_split_prime_examples(n, p, efg):
    sp = split_prime(describe_field(n), p)
    assert (sp.e, sp.f, sp.g) == efg
    if p == 5:
        a, b = sp.X
        assert sp.conjugation[a] == b and sp.conjugation[b] == a
    if p == 3:
        (w,) = sp.X
        assert sp.conjugation[w] == w


def _factor_count_mod_p(n: int, p: int) -> int:
    poly = Poly(cyclotomic_poly(n, t), t, domain=GF(p))
    return len(poly.factor_list()[1])


@pytest.mark.parametrize("n", CANONICAL)
def test_efg_against_factorization(n):
    for p in primes_up_to(100):
        sp = split_prime(CyclotomicField(n, 1), p)
        assert sp.e * sp.f * sp.g == totient(n)
        n0 = n // p ** valuation(n, p)
        assert sp.f == (multiplicative_order(p, n0) if n0 > 1 else 1)
        assert sp.e == totient(p ** valuation(n, p))
        # the number of primes above p is the number of distinct factors of Phi_N mod p
        assert sp.g == _factor_count_mod_p(n, p)


@pytest.mark.parametrize("n", [4, 5, 7, 8, 12, 13, 15, 16, 20, 21, 24])
def test_conjugation_and_fibers(n):
    K = CyclotomicField(n, 1)
    for p in primes_up_to(60):
        sp = split_prime(K, p)
        for w in sp.X:
            assert sp.conjugation[sp.conjugation[w]] == w
            assert sp.fiber[sp.conjugation[w]] == sp.fiber[w]
        for y, ws in sp.fiber_sets().items():
            assert len(ws) in (1, 2)
            if len(ws) == 2:
                assert sp.conjugation[ws[0]] == ws[1]
        # the Galois action is transitive and -1 acts as conjugation
        assert {sp.act(a, sp.X[0]) for a in K.galois_group} == set(sp.X)
        assert all(sp.act(n - 1, w) == sp.conjugation[w] for w in sp.X)


def element(n, coeffs):
    return RingElement.from_coeffs(n, coeffs)


def test_element_norm_examples():
    assert element_norm(element(4, [2, 1])) == 5
    assert element_norm(element(4, [1])) == 1
    assert element_norm(element(3, [3, 1])) == 7


def _sympy_norm(n, coeffs) -> int:
    poly = Poly(list(reversed(coeffs)) or [0], t)
    return int(Poly(cyclotomic_poly(n, t), t).resultant(poly))


def coeff_lists(dim):
    return st.lists(st.integers(-6, 6), min_size=dim, max_size=dim).filter(any)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 8, 12]), st.data())
def test_norm_matches_resultant(n, data):
    coeffs = data.draw(coeff_lists(totient(n)))
    assert element_norm(element(n, coeffs)) == Fraction(_sympy_norm(n, coeffs))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 7, 8, 12]), st.data())
def test_ring_arithmetic_matches_polynomials(n, data):
    d = totient(n)
    a = data.draw(coeff_lists(d))
    b = data.draw(coeff_lists(d))
    phi = Poly(cyclotomic_poly(n, t), t)
    pa, pb = Poly(list(reversed(a)), t), Poly(list(reversed(b)), t)
    prod = (pa * pb).rem(phi)
    want = list(reversed(prod.all_coeffs()))
    want = [int(c) for c in want] + [0] * (d - len(want))
    assert list((element(n, a) * element(n, b)).coeffs) == want[:d]
    # Galois action is a ring automorphism
    for c in CyclotomicField(n, 1).galois_group:
        assert (element(n, a) * element(n, b)).galois(c) == element(n, a).galois(c) * element(n, b).galois(c)


VALUATION_CASES = [(4, 5), (4, 13), (4, 3), (4, 2), (3, 7), (3, 2), (3, 3), (5, 11), (5, 5), (12, 13), (12, 5), (8, 17), (9, 3), (7, 29)]


def _vanishing_factor_count(n, p, coeffs) -> int:
    """Number of prime factors g of Phi_N mod p with x(t) = 0 mod (p, g); only for p not dividing N."""
    phi = Poly(cyclotomic_poly(n, t), t, domain=GF(p))
    x = Poly(list(reversed(coeffs)), t, domain=GF(p))
    return sum(1 for g, _ in phi.factor_list()[1] if x.rem(g).is_zero)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(VALUATION_CASES), st.data())
def test_valuation_vector_properties(case, data):
    n, p = case
    K = CyclotomicField(n, 1)
    sp = split_prime(K, p)
    x = element(n, data.draw(coeff_lists(K.degree)))
    y = element(n, data.draw(coeff_lists(K.degree)))
    vx, vy = valuation_vector(x, sp), valuation_vector(y, sp)
    # multiplicativity
    assert valuation_vector(x * y, sp) == {w: vx[w] + vy[w] for w in sp.X}
    # norm formula: v_p(N x) = f * sum_w ord_w(x) with ord_w(p) = e
    assert valuation(abs(element_norm(x).numerator), p) == sp.f * sum(vx.values())
    # Galois equivariance: ord_{sigma_a w}(sigma_a x) = ord_w(x)
    a = data.draw(st.sampled_from(K.galois_group))
    vg = valuation_vector(x.galois(a), sp)
    assert all(vg[sp.act(a, w)] == vx[w] for w in sp.X)
    if n % p:
        assert sum(1 for v in vx.values() if v > 0) == _vanishing_factor_count(n, p, list(x.coeffs))


def test_valuation_of_rational_integers():
    for n, p in VALUATION_CASES:
        sp = split_prime(CyclotomicField(n, 1), p)
        assert set(valuation_vector(element(n, [p**3 * 7 if p != 7 else p**3 * 11]), sp).values()) == {3 * sp.e}


@pytest.mark.parametrize("n,p,norm", [(4, 5, 5), (3, 7, 7)])
def test_find_prime_generator_examples(n, p, norm):
    K = describe_field(n)
    sp = split_prime(K, p)
    x = find_prime_generator(K, sp, 1, 1, 3)
    assert abs(element_norm(x)) == norm
    assert valuation_vector(x, sp) == {w: (1 if w == 1 else 0) for w in sp.X}


def test_find_prime_generator_inert():
    # 3 is inert in Q(i): the prime above it is (3) itself, of norm 9 = 3^f
    K = describe_field(4)
    sp = split_prime(K, 3)
    x = find_prime_generator(K, sp, sp.X[0], 1, 10)
    assert abs(element_norm(x)) == 9
    assert x in (element(4, [3]), element(4, [-3]), element(4, [0, 3]), element(4, [0, -3]))


def test_find_prime_generator_not_found_in_small_box():
    # 2 + i needs a coefficient of size 2
    K = describe_field(4)
    sp = split_prime(K, 5)
    with pytest.raises(NotFound):
        find_prime_generator(K, sp, 1, 1, 1)
    assert find_prime_generator(K, sp, 1, 1, 2) is not None


@pytest.mark.parametrize("n", [3, 4, 5, 8, 12])
@pytest.mark.slow
def test_find_prime_generator_every_prime(n):
    K = describe_field(n)
    for p in (2, 3, 5, 7, 11, 13):
        sp = split_prime(K, p)
        # an inert p is generated by p itself, outside a box of size 3
        bound = p if sp.g == 1 else 3
        for w in sp.X:
            x = find_prime_generator(K, sp, w, 1, bound)
            assert valuation_vector(x, sp) == {u: (1 if u == w else 0) for u in sp.X}
            assert abs(element_norm(x)) == p**sp.f
