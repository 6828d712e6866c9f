from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from pirarray import gf


def span_by_enumeration(rows, q):
    """Every linear combination of ``rows`` over GF(q); the oracle for in_span."""
    if not rows:
        return None
    n = len(rows[0])
    out = set()
    for coeffs in product(range(q), repeat=len(rows)):
        out.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % q for j in range(n)))
    return out


def matrices(q, max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.tuples(*[st.integers(0, q - 1)] * n), min_size=0, max_size=max_rows)
        .map(lambda rows: (n, rows)))


class TestRowReduce:
    def test_empty(self):
        assert gf.row_reduce([]) == ([], 0)

    def test_duplicate_row(self):
        _, r = gf.row_reduce([(1, 0, 0), (1, 0, 0)])
        assert r == 1

    def test_hand_elimination(self):
        basis, r = gf.row_reduce([(1, 1, 0), (0, 1, 1)])
        assert r == 2
        assert basis == [(1, 0, 1), (0, 1, 1)]

    def test_gf3(self):
        basis, r = gf.row_reduce([(1, 2, 0), (2, 1, 0), (0, 0, 2)], q=3)
        # second row is 2 * first over GF(3)
        assert r == 2
        assert basis == [(1, 2, 0), (0, 0, 1)]

    def test_mixed_lengths(self):
        with pytest.raises(gf.DimensionMismatchError):
            gf.row_reduce([(1, 0), (1, 0, 0)])

    def test_non_prime_modulus(self):
        with pytest.raises(ValueError):
            gf.row_reduce([(1, 0)], q=4)


class TestInSpan:
    @pytest.mark.parametrize("rows,target,expected", [
        ([(1, 1, 0)], (1, 1, 0), True),
        ([(0, 1, 0), (1, 1, 0)], (1, 0, 0), True),
        ([(0, 1, 0), (0, 0, 1)], (1, 0, 0), False),
    ])
    def test_examples(self, rows, target, expected):
        assert gf.in_span(rows, target) is expected

    def test_zero_target_always(self):
        assert gf.in_span([], (0, 0))

    def test_difference_needs_minus_sign_over_gf5(self):
        # x1 = (x1+x2) - x2 works over any field
        assert gf.in_span([(1, 1), (0, 1)], (1, 0), q=5)

    def test_mismatch(self):
        with pytest.raises(gf.DimensionMismatchError):
            gf.in_span([(1, 0, 0)], (1, 0))


@pytest.mark.parametrize("q", [2, 3, 5])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_in_span_matches_enumeration(q, data):
    n, rows = data.draw(matrices(q, max_rows=4, max_cols=4))
    target = data.draw(st.tuples(*[st.integers(0, q - 1)] * n))
    members = span_by_enumeration(rows, q) or {tuple([0] * n)}
    assert gf.in_span(rows, target, q) == (target in members)


@pytest.mark.parametrize("q", [2, 3, 7])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_rank_properties(q, data):
    n, rows = data.draw(matrices(q))
    basis, r = gf.row_reduce(rows, q)
    assert r == len(basis) == gf.rank(rows, q)
    assert r <= min(len(rows), n)
    assert gf.row_reduce(basis, q) == (basis, r)
    if rows:
        # same span both ways
        assert all(gf.in_span(basis, row, q) for row in rows)
        assert all(gf.in_span(rows, b, q) for b in basis)
    target = data.draw(st.tuples(*[st.integers(0, q - 1)] * n))
    assert gf.in_span(rows, target, q) == (gf.rank(list(rows) + [target], q) == r)


def test_rref_shape_over_gf2():
    basis, _ = gf.row_reduce([(0, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1)])
    pivots = [row.index(1) for row in basis]
    assert pivots == sorted(pivots)
    for row, piv in zip(basis, pivots):
        assert sum(other[piv] for other in basis) == 1
