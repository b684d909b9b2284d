import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weil_lab.category import (
    MotiveObject,
    UnsupportedLevel,
    dual,
    from_explicit,
    simple_from_weil,
    tensor,
    torsion_character_check,
    unit,
)
from weil_lab.cyclotomic import RingElement, describe_field
from weil_lab.weil import DivisibilityError, Explicit, SlopeVector, center_degree, construct_weil, kernel_basis, kernel_box

QI = describe_field(4)


def gaussian(a, b, k=1):
    return from_explicit(Explicit(RingElement.from_coeffs(4, [a, b]), 5, k), QI)


def simple(pi):
    return MotiveObject.simple(simple_from_weil(pi))


def test_simple_examples():
    s = simple_from_weil(gaussian(3, 4))
    assert s.rank == 2 and len(s.members) == 2
    assert simple_from_weil(gaussian(3, -4)) == s
    one = simple_from_weil(gaussian(1, 0, 0))
    assert one.rank == 1 and unit(QI, 5) == MotiveObject.simple(one)
    i = simple_from_weil(gaussian(0, 1, 0))
    assert i.rank == 2
    assert {str(e.explicit) for e in i.elements()} == {"z", "-z"}


def test_worked_decomposition():
    pi = gaussian(3, 4)
    prod = tensor(simple(pi), simple(gaussian(3, -4)))
    want = unit(QI, 5) + unit(QI, 5) + simple(from_explicit(pi.explicit**2, QI))
    assert prod == want
    assert prod.rank == 4


def test_i_tensor_i():
    i = simple(gaussian(0, 1, 0))
    minus_one = simple(gaussian(-1, 0, 0))
    prod = tensor(i, i)
    # eigenvalues {i, -i} x {i, -i} = {-1, 1, 1, -1}
    assert prod == minus_one + minus_one + unit(QI, 5) + unit(QI, 5)
    assert prod.rank == 4


def test_unit_and_dual_examples():
    x = simple(gaussian(3, 4))
    assert tensor(x, unit(QI, 5)) == x
    assert dual(x) == x
    assert dual(unit(QI, 5)) == unit(QI, 5)
    assert MotiveObject(QI, 5, 1).is_zero() and MotiveObject(QI, 5, 1).rank == 0


def _brute_tensor(x, y):
    eig = Counter()
    for s, a in x.terms:
        for t, b in y.terms:
            for u in s.elements():
                for v in t.elements():
                    eig[str(u.explicit * v.explicit)] += a * b
    return eig


def _eigen(x):
    eig = Counter()
    for s, a in x.terms:
        for u in s.elements():
            eig[str(u.explicit)] += a
    return eig


def random_object(rng, K, p, pool):
    terms = [(simple_from_weil(rng.choice(pool)), rng.randint(1, 2)) for _ in range(rng.randint(1, 3))]
    return MotiveObject.of(K, p, 1, terms)


def _pool(n, p, box):
    K = describe_field(n)
    pool = [construct_weil(s, 1) for s in kernel_box(K, p, box)]
    pool += [from_explicit(Explicit(K.root_of_unity(t), p, 0), K) for t in range(K.torsion_order)]
    return K, pool


@pytest.mark.parametrize("n,p", [(4, 5), (3, 7), (5, 11)])
def test_category_laws_random(n, p):
    K, pool = _pool(n, p, 1)
    rng = random.Random(n * 1000 + p)
    for _ in range(20):
        x, y = random_object(rng, K, p, pool), random_object(rng, K, p, pool)
        xy = tensor(x, y)
        assert xy.rank == x.rank * y.rank
        assert xy == tensor(y, x)
        assert _eigen(xy) == _brute_tensor(x, y)
        assert dual(dual(x)) == x and dual(x).rank == x.rank
        assert tensor(x, unit(K, p)) == x
        assert dual(xy) == tensor(dual(x), dual(y))


def test_rank_equals_orbit_size_and_center():
    for n, p in ((4, 5), (3, 7), (12, 13)):
        K = describe_field(n)
        for s in kernel_basis(K, p):
            pi = construct_weil(s, 1)
            c = simple_from_weil(pi)
            assert c.rank == len(c.members)
            assert c.center_degree == center_degree(pi)
            assert c.center_degree <= c.rank


def test_higher_level_refused():
    K = describe_field(4)
    pi = construct_weil(SlopeVector(K, 5, (1, -1)), 2)
    x = simple(pi)
    with pytest.raises(UnsupportedLevel):
        tensor(x, x)
    c = simple_from_weil(pi)
    low, high = c.rank_bounds
    assert low == center_degree(pi) and high >= low
    with pytest.raises(UnsupportedLevel):
        c.rank
    assert dual(dual(x)) == x


def test_mixing_categories_rejected():
    with pytest.raises(ValueError):
        tensor(unit(QI, 5), unit(QI, 13))


def test_torsion_character_check_examples():
    assert torsion_character_check(QI, 1) == (True, 4)
    assert torsion_character_check(describe_field(3), 2) == (True, 12)
    assert torsion_character_check(QI, 3) == (True, 12)
    with pytest.raises(DivisibilityError):
        torsion_character_check(QI, 1, p=3)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([3, 4, 5, 7, 8, 12, 15]), st.integers(1, 6))
def test_torsion_character_check_grid(n, level):
    K = describe_field(n)
    ok, order = torsion_character_check(K, level)
    assert ok and order == K.torsion_order * level
