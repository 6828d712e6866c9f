"""Exact checks of the k-PIR property.

``verify_witness`` validates a claimed list of disjoint spanning subsets;
``brute_force_k`` independently finds the true maximum for small codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from . import gf
from .model import ArrayCode, Witness

DEFAULT_BRUTE_CAP = 14


class CapExceededError(ValueError):
    pass


@dataclass(frozen=True)
class Failure:
    item: int
    subset: tuple[int, ...]
    reason: str  # "overlap" | "does-not-span" | "bad-index"


@dataclass(frozen=True)
class VerificationReport:
    per_item: dict[int, int]
    failures: tuple[Failure, ...] = field(default=())

    @property
    def k(self) -> int:
        return min(self.per_item.values(), default=0)

    @property
    def ok(self) -> bool:
        return not self.failures


def _rows(code: ArrayCode, subset: Iterable[int]) -> list:
    if code.q == 2:
        return [cell for c in subset for cell in code.packed[c]]
    return [cell for c in subset for cell in code.columns[c]]


def spans(code: ArrayCode, subset: Iterable[int], i: int) -> bool:
    """True iff the cells of the columns in ``subset`` together span ``e_i``."""
    subset = list(subset)
    if not 0 <= i < code.p:
        raise IndexError(f"item {i} out of range for p={code.p}")
    for c in subset:
        if not 0 <= c < code.m:
            raise IndexError(f"column {c} out of range for m={code.m}")
    if code.q == 2:
        return gf.bits_in_span(_rows(code, subset), 1 << i)
    return gf.in_span(_rows(code, subset), gf.unit_vector(i, code.p), code.q)


def verify_witness(code: ArrayCode, witness: Witness) -> VerificationReport:
    """Count valid subsets per item; invalid ones are reported, not counted.

    A subset that overlaps an earlier valid subset of the same item fails
    with ``overlap``. Items missing from the witness count zero.
    """
    per_item: dict[int, int] = {}
    failures: list[Failure] = []
    for i in range(code.p):
        used: set[int] = set()
        count = 0
        for subset in witness[i]:
            if any(not 0 <= c < code.m for c in subset) or len(set(subset)) != len(subset):
                failures.append(Failure(i, subset, "bad-index"))
                continue
            if used.intersection(subset):
                failures.append(Failure(i, subset, "overlap"))
                continue
            if not subset or not spans(code, subset, i):
                failures.append(Failure(i, subset, "does-not-span"))
                continue
            used.update(subset)
            count += 1
        per_item[i] = count
    for i in witness.subsets:
        if not 0 <= i < code.p:
            failures.append(Failure(i, (), "bad-index"))
    return VerificationReport(per_item, tuple(failures))


def minimal_spanning_sets(code: ArrayCode, i: int) -> list[int]:
    """All inclusion-minimal column sets spanning ``e_i``, as bitmasks.

    Subsets are enumerated by increasing size; any superset of a set already
    found is skipped without a rank computation.
    """
    found: list[int] = []
    for size in range(1, code.m + 1):
        for combo in combinations(range(code.m), size):
            mask = 0
            for c in combo:
                mask |= 1 << c
            if any(f & mask == f for f in found):
                continue
            if spans(code, combo, i):
                found.append(mask)
    return found


def max_set_packing(sets: list[int]) -> int:
    """Largest number of pairwise disjoint bitmasks, by branch and bound."""
    sets = sorted(set(sets), key=lambda s: (bin(s).count("1"), s))
    best = 0

    def search(cands: list[int], count: int) -> None:
        nonlocal best
        if not cands:
            best = max(best, count)
            return
        if count + len(cands) <= best:
            return
        union = 0
        for s in cands:
            union |= s
        smallest = bin(cands[0]).count("1")
        if count + bin(union).count("1") // smallest <= best:
            return
        first = cands[0]
        search([s for s in cands[1:] if not s & first], count + 1)
        search(cands[1:], count)

    search(sets, 0)
    return best


def brute_force_k(code: ArrayCode, i: int, max_m: int = DEFAULT_BRUTE_CAP) -> int:
    """Exact maximum number of disjoint column subsets spanning ``e_i``."""
    if code.m > max_m:
        raise CapExceededError(f"m={code.m} exceeds brute-force cap {max_m}")
    if not 0 <= i < code.p:
        raise IndexError(f"item {i} out of range for p={code.p}")
    return max_set_packing(minimal_spanning_sets(code, i))


def max_k(code: ArrayCode, max_m: int = DEFAULT_BRUTE_CAP) -> int:
    if code.m > max_m:
        raise CapExceededError(f"m={code.m} exceeds brute-force cap {max_m}")
    return min(brute_force_k(code, i, max_m) for i in range(code.p))
