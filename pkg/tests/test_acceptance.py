"""Acceptance criteria. Each test carries ``@criterion(n)``; conftest prints one
PASS/FAIL line per criterion at the end of the run."""

import time
from fractions import Fraction
from math import gcd

import pytest

from pirarray import bounds, constructions
from pirarray.bounds import (
    compare_section42,
    floor_rate,
    lp_check_theorem7,
    modified_closed_form,
    s3_binomial_inequality,
    ub_asymptotic,
    ub_large_s,
    ub_small_s,
)
from pirarray.matching import is_perfect, max_matching
from pirarray.model import rate
from pirarray.verifier import brute_force_k, max_k, verify_witness

criterion = pytest.mark.criterion


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def verified_rate(code, witness):
    rep = verify_witness(code, witness)
    assert rep.ok, rep.failures[:5]
    return rate(rep.k, code.m)


def strict_below_asymptotic(code, witness):
    return verified_rate(code, witness) < ub_asymptotic(Fraction(code.p, code.t))


@criterion(1)
def test_intro_fixture():
    with Timer() as tm:
        code, witness = constructions.intro_example_code()
        k = max_k(code)
    assert k == 4
    assert rate(k, code.m) == Fraction(2, 3)
    assert verify_witness(code, witness).k == 4
    assert tm.elapsed < 1


@criterion(2)
def test_t23_d5_reproduction():
    with Timer() as tm:
        prm = constructions.small_s_params(23, 5)
        code, witness = constructions.construct_small_s(23, 5)
        rep = verify_witness(code, witness)
    assert (prm.omega, prm.mu, prm.omega1, prm.d1, prm.omega2, prm.d2) == (2, 14, 1, 5, 2, 3)
    assert code.m == prm.m == 154
    assert rep.ok and rep.k == 139
    assert rate(rep.k, code.m) == Fraction(139, 154) == ub_small_s(23, 5)
    assert tm.elapsed < 10


@criterion(3)
def test_tightness_sweep():
    pts = [(t, d) for d in range(1, 5) for t in range(max(2, d * d - d + 1), 26) if d <= t]
    with Timer() as tm:
        for t, d in pts:
            code, witness = constructions.construct_small_s(t, d)
            p = t + d
            assert code.m == p * (2 * d + 1) // gcd(d * d + d, p * (2 * d + 1)), (t, d)
            assert verified_rate(code, witness) == ub_small_s(t, d), (t, d)
    assert tm.elapsed < 120


@criterion(4)
def test_oracle_cross_check():
    with Timer() as tm:
        code, _ = constructions.construct_small_s(2, 1)
        prm = constructions.small_s_params(2, 1)
        formula_k = (prm.d ** 2 + 2 * prm.t * prm.d + prm.t) // prm.omega
        assert code.m == 9
        assert [brute_force_k(code, i) for i in range(code.p)] == [formula_k] * code.p == [7] * 3
        intro, witness = constructions.intro_example_code()
        per_item = verify_witness(intro, witness).per_item
        assert {i: brute_force_k(intro, i) for i in range(intro.p)} == per_item
    assert tm.elapsed < 5


@criterion(5)
@pytest.mark.parametrize("t,d", [(3, 2), (23, 5)])
def test_matching_regime(t, d):
    prm = constructions.small_s_params(t, d)
    assert d * d - d < t < d * d
    _, b_sets = constructions.small_s_sets(prm)
    index_of = {b: j for j, b in enumerate(b_sets)}
    n = len(b_sets)
    for i in range(prm.p):
        ig, servers = constructions.small_s_item_graph(prm, i)
        g = ig.graph
        missing = {index_of[servers[ig.right[r]].sum_set]
                   for u in range(g.left_size) for r in range(g.right_size) if (u, r) not in g.edges}
        # the code is cyclic, so item i sees item 0's pattern shifted by i
        assert missing <= {i % n, (i + prm.special_sigma_index) % n}, (i, missing)
        if i == 0:
            assert missing and missing <= {0, prm.special_sigma_index}
        assert g.left_size == g.right_size
        assert is_perfect(g, max_matching(g))


@criterion(6)
def test_modified_construction():
    with Timer() as tm:
        code, witness = constructions.construct_modified(3, 2)
        rep = verify_witness(code, witness)
    assert rep.ok
    assert (code.m, rep.k) == (141, 86) == modified_closed_form(3, 2)
    r = rate(rep.k, code.m)
    assert floor_rate(3, 2) == Fraction(7, 12) < r
    assert r < ub_large_s(2, 4) == Fraction(13, 21)
    assert tm.elapsed < 30


@criterion(7)
def test_bound_dominance():
    with Timer() as tm:
        pts = [(t, p - t) for p in range(3, 31) for t in range(2, p) if p - t > t]
        assert all(ub_large_s(t, d) < ub_small_s(t, d) for t, d in pts)
    assert len(pts) > 0
    assert tm.elapsed < 1


@criterion(8)
def test_lp_consistency():
    cases = [(2, 3, 6), (2, 4, 7)] + [(3, 4, 8 * k) for k in range(1, 6)]
    with Timer() as tm:
        for t, d, m in cases:
            res = lp_check_theorem7(t, d, m)
            p = t + d
            assert res.best <= Fraction(m * (p * p + t * p + 2 * t), 2 * (p + 1))
            if m * (t + 1) % (p + 1) == 0:
                assert res.best == res.continuous_optimum
                assert res.optimum_with_u0_w0
                assert res.argmax.u == res.argmax.w == 0
    assert tm.elapsed < 10


@criterion(9)
def test_rate_comparisons():
    with Timer() as tm:
        applied = 0
        for s in (3, 4):
            for t in range(2, 7):
                rep = compare_section42(s, t)
                assert rep.all_strict, (s, t, rep)
                applied += len(rep.rows)
        assert applied > 0
        assert compare_section42(3, 3).rows[0].theirs == Fraction(13, 21)
        for t in range(1, 21):
            lhs, rhs = s3_binomial_inequality(t)
            assert lhs > rhs
    assert tm.elapsed < 5


@criterion(10)
def test_strictness_all_constructed():
    built = [constructions.intro_example_code(), constructions.construct_small_s(2, 1),
             constructions.construct_modified(3, 2)]
    built += [constructions.construct_small_s(t, d) for t, d in [(23, 5), (3, 2)]]
    built += [constructions.construct_small_s(t, d)
              for d in range(1, 5) for t in range(max(2, d * d - d + 1), 26) if d <= t]
    for code, witness in built:
        assert strict_below_asymptotic(code, witness)


@criterion("be")
@pytest.mark.parametrize("s,t", [(3, 2), (4, 2)])
def test_be_properties(s, t):
    code, witness = constructions.construct_be(s, t)
    rep = verify_witness(code, witness)
    assert rep.ok
    assert all(len(sub) <= 2 for i in range(code.p) for sub in witness[i])
    r = rate(rep.k, code.m)
    assert (code.m, rep.k) == bounds.be_closed_form(s, t)
    assert r > floor_rate(s, t)
    assert r < ub_asymptotic(s)
