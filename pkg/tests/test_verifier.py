from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pirarray import constructions
from pirarray.model import ArrayCode, Witness
from pirarray.verifier import (
    CapExceededError,
    brute_force_k,
    max_k,
    max_set_packing,
    spans,
    verify_witness,
)


@pytest.fixture(scope="module")
def intro():
    return constructions.intro_example_code()


class TestSpans:
    # 1-indexed columns 1, {3,4} and 2 of the fixture table
    def test_single_column(self, intro):
        assert spans(intro[0], {0}, 0)

    def test_pair(self, intro):
        assert spans(intro[0], {2, 3}, 0)

    def test_column_without_item(self, intro):
        assert not spans(intro[0], {1}, 0)

    def test_empty_subset(self, intro):
        assert not spans(intro[0], set(), 0)

    def test_out_of_range(self, intro):
        with pytest.raises(IndexError):
            spans(intro[0], {6}, 0)
        with pytest.raises(IndexError):
            spans(intro[0], {0}, 6)

    @settings(max_examples=100, deadline=None)
    @given(st.sets(st.integers(0, 5)), st.sets(st.integers(0, 5)), st.integers(0, 5))
    def test_monotone(self, intro, a, b, i):
        code = intro[0]
        if spans(code, a, i):
            assert spans(code, a | b, i)


class TestVerifyWitness:
    def test_intro(self, intro):
        rep = verify_witness(*intro)
        assert rep.k == 4 and rep.ok

    def test_overlap(self, intro):
        code, _ = intro
        rep = verify_witness(code, Witness({i: [(i,), (i, 1)] for i in range(6)}))
        assert rep.per_item[0] == 1
        assert any(f.item == 0 and f.reason == "overlap" for f in rep.failures)

    def test_empty_subset(self, intro):
        code, witness = intro
        subs = dict(witness.subsets)
        subs[0] = subs[0] + ((),)
        rep = verify_witness(code, Witness(subs))
        assert rep.per_item[0] == 4
        assert [f.reason for f in rep.failures] == ["does-not-span"]

    def test_does_not_span(self, intro):
        code, _ = intro
        rep = verify_witness(code, Witness({0: [(1,)]}))
        assert rep.per_item[0] == 0 and rep.failures[0].reason == "does-not-span"
        assert rep.k == 0

    def test_bad_index(self, intro):
        code, _ = intro
        rep = verify_witness(code, Witness({0: [(0,), (9,)]}))
        assert rep.per_item[0] == 1
        assert rep.failures[0].reason == "bad-index"


class TestBruteForce:
    def test_intro_item0(self, intro):
        assert brute_force_k(intro[0], 0) == 4

    def test_intro_all(self, intro):
        assert max_k(intro[0]) == 4

    def test_single_column(self):
        code = ArrayCode(1, 2, [[(1, 0)]])
        assert brute_force_k(code, 0) == 1
        assert brute_force_k(code, 1) == 0

    @pytest.mark.parametrize("m", [1, 3, 5])
    def test_full_copies(self, m):
        p = 3
        col = [tuple(1 if j == i else 0 for j in range(p)) for i in range(p)]
        code = ArrayCode(p, p, [col] * m)
        assert max_k(code) == m

    def test_small_s_t2_d1(self):
        code, _ = constructions.construct_small_s(2, 1)
        assert [brute_force_k(code, i) for i in range(code.p)] == [7, 7, 7]

    def test_cap(self):
        code, _ = constructions.construct_small_s(3, 2)
        with pytest.raises(CapExceededError):
            brute_force_k(code, 0)
        with pytest.raises(CapExceededError):
            max_k(code, max_m=10)

    def test_gf3(self):
        code, _ = constructions.intro_example_code(q=3)
        assert max_k(code) == 4

    def test_adding_a_column_never_hurts(self, intro):
        code, _ = intro
        base = [brute_force_k(code, i) for i in range(6)]
        for extra in code.columns:
            bigger = ArrayCode(3, 6, code.columns + (extra,))
            assert all(brute_force_k(bigger, i) >= b for i, b in enumerate(base))


def _packing_by_enumeration(sets):
    for size in range(len(sets), 0, -1):
        for combo in combinations(sets, size):
            acc = 0
            ok = True
            for s in combo:
                if acc & s:
                    ok = False
                    break
                acc |= s
            if ok:
                return size
    return 0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 2**9 - 1), max_size=10))
def test_set_packing_matches_enumeration(sets):
    assert max_set_packing(sets) == _packing_by_enumeration(sorted(set(sets)))


@st.composite
def small_codes(draw):
    p = draw(st.integers(2, 4))
    t = draw(st.integers(1, p))
    m = draw(st.integers(1, 4))
    cell = st.tuples(*[st.integers(0, 1)] * p)
    cols = draw(st.lists(st.lists(cell, min_size=t, max_size=t), min_size=m, max_size=m))
    return ArrayCode(t, p, cols)


@settings(max_examples=60, deadline=None)
@given(small_codes(), st.data())
def test_brute_force_against_partition_enumeration(code, data):
    """Exhaustive search over assignments of columns to subsets, tiny codes only."""
    i = data.draw(st.integers(0, code.p - 1))
    best = 0
    m = code.m
    # label each column with a group in 0..m (0 = unused)
    from itertools import product

    for labels in product(range(m + 1), repeat=m):
        groups = {}
        for c, g in enumerate(labels):
            if g:
                groups.setdefault(g, []).append(c)
        if len(groups) <= best:
            continue
        if all(spans(code, cols, i) for cols in groups.values()):
            best = len(groups)
    assert brute_force_k(code, i) == best


@pytest.mark.parametrize("build", [
    constructions.intro_example_code,
    lambda: constructions.construct_small_s(2, 1),
])
def test_oracle_at_least_witness(build):
    code, witness = build()
    rep = verify_witness(code, witness)
    for i in range(code.p):
        assert brute_force_k(code, i) >= rep.per_item[i]
