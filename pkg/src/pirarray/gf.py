"""Dense linear algebra over a prime field GF(q).

Vectors are plain tuples of ints in ``[0, q)``. Over GF(2) rows are packed
into Python ints and eliminated with XOR, which is what keeps witness
verification of codes with a few hundred columns fast.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class DimensionMismatchError(ValueError):
    """Rows (or a target vector) of different lengths were mixed."""


@lru_cache(maxsize=None)
def is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def check_modulus(q: int) -> int:
    if not isinstance(q, int) or not is_prime(q):
        raise ValueError(f"field modulus must be a prime, got {q!r}")
    return q


def _common_length(rows: Sequence[Sequence[int]], extra: Sequence[int] | None = None) -> int | None:
    n = None
    for row in rows:
        if n is None:
            n = len(row)
        elif len(row) != n:
            raise DimensionMismatchError(f"row lengths differ: {n} vs {len(row)}")
    if extra is not None:
        if n is not None and len(extra) != n:
            raise DimensionMismatchError(f"target has length {len(extra)}, rows have {n}")
        n = len(extra)
    return n


def pack(vec: Sequence[int]) -> int:
    """Pack a 0/1 vector into an int, coordinate ``j`` at bit ``j``."""
    out = 0
    for j, c in enumerate(vec):
        if c & 1:
            out |= 1 << j
    return out


def unpack(bits: int, n: int) -> Vector:
    return tuple((bits >> j) & 1 for j in range(n))


def reduce_bits(rows: Iterable[int]) -> dict[int, int]:
    """Echelonize packed GF(2) rows.

    Returns a map ``pivot_bit -> row`` where each row's lowest set bit is its
    pivot. Not fully reduced; use :func:`row_reduce` for RREF.
    """
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            b = basis.get(low)
            if b is None:
                basis[low] = r
                break
            r ^= b
    return basis


def bits_in_span(rows: Iterable[int], target: int) -> bool:
    """True iff packed ``target`` lies in the GF(2) span of packed ``rows``."""
    if target == 0:
        return True
    basis = reduce_bits(rows)
    while target:
        b = basis.get(target & -target)
        if b is None:
            return False
        target ^= b
    return True


def _rref_mod(rows: Sequence[Sequence[int]], n: int, q: int) -> list[list[int]]:
    work = [[c % q for c in row] for row in rows]
    pivot_row = 0
    for col in range(n):
        pivot = next((r for r in range(pivot_row, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[pivot_row], work[pivot] = work[pivot], work[pivot_row]
        inv = pow(work[pivot_row][col], q - 2, q)
        prow = [(c * inv) % q for c in work[pivot_row]]
        work[pivot_row] = prow
        for r in range(len(work)):
            f = work[r][col]
            if r != pivot_row and f:
                work[r] = [(a - f * b) % q for a, b in zip(work[r], prow)]
        pivot_row += 1
        if pivot_row == len(work):
            break
    return work[:pivot_row]


def row_reduce(rows: Sequence[Sequence[int]], q: int = 2) -> tuple[list[Vector], int]:
    """Reduced row-echelon basis of the row span and its rank.

    Basis rows are ordered by pivot column, leftmost first.

    >>> row_reduce([(1, 1, 0), (0, 1, 1)])
    ([(1, 0, 1), (0, 1, 1)], 2)
    """
    check_modulus(q)
    n = _common_length(rows)
    if n is None:
        return [], 0
    if q == 2:
        basis = reduce_bits(pack(r) for r in rows)
        # back-substitute so every pivot column is clear in the other rows
        pivots = sorted(basis)
        for i, piv in enumerate(pivots):
            for other in pivots[:i]:
                if basis[other] & piv:
                    basis[other] ^= basis[piv]
        out = [unpack(basis[piv], n) for piv in pivots]
        return out, len(out)
    out = [tuple(r) for r in _rref_mod(rows, n, q)]
    return out, len(out)


def rank(rows: Sequence[Sequence[int]], q: int = 2) -> int:
    check_modulus(q)
    n = _common_length(rows)
    if n is None:
        return 0
    if q == 2:
        return len(reduce_bits(pack(r) for r in rows))
    return len(_rref_mod(rows, n, q))


def in_span(rows: Sequence[Sequence[int]], target: Sequence[int], q: int = 2) -> bool:
    """True iff ``target`` is a linear combination of ``rows`` over GF(q)."""
    check_modulus(q)
    n = _common_length(rows, target)
    if q == 2:
        return bits_in_span((pack(r) for r in rows), pack(target))
    if not any(c % q for c in target):
        return True
    base = _rref_mod(rows, n, q)
    return len(_rref_mod(base + [list(target)], n, q)) == len(base)


def unit_vector(i: int, p: int) -> Vector:
    if not 0 <= i < p:
        raise IndexError(f"item {i} out of range for p={p}")
    return tuple(1 if j == i else 0 for j in range(p))


def indicator(items: Iterable[int], p: int) -> Vector:
    s = set(items)
    bad = [i for i in s if not 0 <= i < p]
    if bad:
        raise IndexError(f"items {sorted(bad)} out of range for p={p}")
    return tuple(1 if j in s else 0 for j in range(p))
