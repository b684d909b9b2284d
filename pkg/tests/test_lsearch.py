import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weil_lab.cyclotomic import describe_field
from weil_lab.lsearch import (
    MissingCertificate,
    SearchTask,
    condition_b,
    condition_c,
    condition_c_oracle,
    condition_d,
    e15_check,
    evaluate,
    hits,
    make_task,
    probe_question,
    search,
)
from weil_lab.modmath import multiplicative_order, primes_up_to
from weil_lab.weil import DivisibilityError, SlopeVector, WeilElement


@pytest.fixture(scope="module")
def gaussian_task():
    return make_task(4, 5, 1, 100, "ab")


def test_condition_c_examples():
    assert condition_c(13, 5, 4)
    assert condition_c(13, 7, 6)
    assert not condition_c(13, 3, 4)


@settings(max_examples=300)
@given(st.sampled_from(primes_up_to(3000)), st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 24))
def test_condition_c_matches_order_oracle(l, p, mn):
    if l == p:
        return
    assert condition_c(l, p, mn) == condition_c_oracle(l, p, mn)
    if condition_c(l, p, mn):
        assert (l - 1) % mn == 0
        # p generates the order-mn quotient: its order in it is exactly mn
        order = multiplicative_order(p, l)
        assert order // math.gcd(order, (l - 1) // mn) == mn


def test_condition_d_examples(gaussian_task):
    assert condition_d(13, gaussian_task)
    assert condition_d(17, gaussian_task)
    assert not condition_d(7, gaussian_task)
    assert not condition_d(5, gaussian_task)


def _brute_residues(l: int, a: int, b: int, p: int, power: int) -> list[int]:
    """Residues of ((a + b i)/p)^power at the primes of Q(i) above l, via the roots of x^2 + 1."""
    roots = [r for r in range(l) if (r * r + 1) % l == 0]
    return sorted(pow((a + b * r) * pow(p, -1, l) % l, power, l) for r in roots)


def test_condition_b_certificate_at_13(gaussian_task):
    assert _brute_residues(13, 3, 4, 5, 4) == [3, 9]
    fourth_powers = {pow(x, 4, 13) for x in range(1, 13)}
    assert {3, 9} <= fourth_powers
    cert = []
    assert condition_b(13, gaussian_task, cert) == "true"
    text = repr(cert)
    assert "3" in text and "9" in text


def test_condition_b_requires_c(gaussian_task):
    with pytest.raises(ValueError):
        condition_b(7, gaussian_task)


@pytest.mark.parametrize("l", [l for l in primes_up_to(400) if l % 4 == 1 and l != 5])
def test_condition_b_matches_brute_force(gaussian_task, l):
    if not condition_c(l, 5, 4):
        return
    pi = gaussian_task.generators[0].explicit
    a, b = pi.numerator.coeffs
    res = _brute_residues(l, a, b, 5, 4)
    powers = {pow(x, 4, l) for x in range(1, l)}
    want = "true" if all(r in powers for r in res) else "false"
    assert condition_b(l, gaussian_task) == want


def test_search_examples(gaussian_task):
    cands = search(gaussian_task)
    assert [c.l for c in cands] == [l for l in primes_up_to(100) if l != 5]
    found = hits(cands)
    assert found[0].l == 13
    for c in cands:
        assert c.passes_a == c.passes_c
        if c.passes_c:
            assert (c.l - 1) % 4 == 0
        else:
            assert c.passes_b == "n/a"
    assert hits(search(make_task(4, 5, 1, 12))) == []


def test_search_independent_of_parallelism():
    task = make_task(4, 5, 1, 3000)
    assert search(task, 1) == search(task, 4)


def test_inert_prime_task_needs_level_two():
    with pytest.raises(DivisibilityError):
        make_task(4, 3, 1, 100)
    task = make_task(4, 3, 2, 200)
    # kernel is empty: only the torsion generator, and mn = 8
    assert len(task.generators) == 1 and task.mn == 8
    for c in search(task):
        if c.passes_c:
            assert (c.l - 1) % 8 == 0
            assert c.passes_b == "true"  # pi^{mn} = 1 is a norm


@pytest.mark.parametrize("conductor,p,n", [(4, 5, 1), (4, 13, 1), (3, 7, 1), (3, 13, 1), (4, 3, 2), (3, 2, 2), (5, 11, 1)])
def test_cd_implies_b(conductor, p, n):
    task = make_task(conductor, p, n, 3000, "cd")
    for c in search(task):
        if c.passes_c and c.passes_d:
            assert c.hit
            assert c.passes_b in ("true", "undetermined")


def test_e15_on_hits(gaussian_task):
    for c in hits(search(gaussian_task)):
        report = e15_check(gaussian_task, c.l)
        assert report["ok"], report


def test_missing_certificate():
    K = describe_field(4)
    bare = WeilElement(K, 5, 1, 0, SlopeVector(K, 5, (1, -1)), None)
    task = SearchTask(K, 5, 1, 100, "ab", (bare,))
    with pytest.raises(MissingCertificate):
        condition_d(13, task)


def test_bad_mode():
    with pytest.raises(ValueError):
        make_task(4, 5, 1, 100, "xyz")


def test_probe_question():
    rows = probe_question([(4, 5, 1, 10**4), (4, 3, 1, 100), (6, 5, 1, 100)])
    assert rows[0]["smallest_hit"] == 13 and rows[0]["hits"][0] == 13
    assert rows[1]["error"] == "DivisibilityError"
    assert rows[2]["error"] == "UnsupportedConductor"
    assert probe_question([]) == []
    assert all("none" not in str(r.get("status", "")) or r["smallest_hit"] is None for r in rows)


def test_candidate_json(gaussian_task):
    js = evaluate(13, gaussian_task).to_json()
    assert js["l"] == 13 and js["hit"] and js["passes_b"] == "true"
    assert js["L"] == "degree-mn subfield of Q(zeta_13)"
