"""PIR array code constructions, each returned with an explicit witness.

Every construction follows the same recipe per item ``i``: a server holding
``x_i`` as a singleton cell is a subset by itself, and every other server is
paired with a partner through a perfect matching in a bipartite graph whose
right side holds the servers that carry ``x_i`` inside their summation cell.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Callable, Hashable, Iterable, Sequence

from .gf import indicator, unit_vector
from .matching import BipartiteGraph, is_perfect, max_matching
from .model import (
    SINGLETON,
    TYPE_J,
    ArrayCode,
    Server,
    Witness,
    make_sigma_server,
    make_singleton_server,
)

DEFAULT_MAX_COLUMNS = 10**6


class ConstructionError(RuntimeError):
    """A construction step that the underlying theory says cannot fail did."""


class UnsupportedParameterError(ValueError):
    pass


class SizeGuardExceeded(RuntimeError):
    def __init__(self, kind: str, m: int, limit: int):
        self.kind = kind
        self.m = m
        self.limit = limit
        super().__init__(f"{kind} code needs m={m} columns, over the limit of {limit}")


def max_columns_default() -> int:
    env = os.environ.get("PIR_MAX_COLUMNS")
    return int(env) if env else DEFAULT_MAX_COLUMNS


# -- shared witness machinery -------------------------------------------------


@dataclass(frozen=True)
class ItemGraph:
    """Pairing graph for one item: left/right entries are column indices."""

    item: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    graph: BipartiteGraph


def _item_graph(servers: Sequence[Server], i: int,
                left_keys: Callable[[int], Iterable[Hashable]],
                right_keys: Callable[[int], Iterable[Hashable]]) -> ItemGraph:
    left = [c for c, s in enumerate(servers) if i not in s.singletons and i not in s.sum_set]
    right = [c for c, s in enumerate(servers) if i in s.sum_set]
    by_key: dict[Hashable, list[int]] = {}
    for ri, c in enumerate(right):
        for key in right_keys(c):
            by_key.setdefault(key, []).append(ri)
    edges = set()
    for li, c in enumerate(left):
        for key in left_keys(c):
            for ri in by_key.get(key, ()):
                edges.add((li, ri))
    return ItemGraph(i, tuple(left), tuple(right), BipartiteGraph(len(left), len(right), edges))


def _witness(servers: Sequence[Server], p: int,
             graph_for: Callable[[int], ItemGraph]) -> Witness:
    subsets = {}
    for i in range(p):
        singles = [(c,) for c, s in enumerate(servers) if i in s.singletons]
        ig = graph_for(i)
        matching = max_matching(ig.graph)
        if not is_perfect(ig.graph, matching):
            raise ConstructionError(
                f"item {i}: no perfect matching ({len(matching)} of "
                f"{ig.graph.left_size}x{ig.graph.right_size})")
        pairs = sorted(tuple(sorted((ig.left[a], ig.right[b]))) for a, b in matching.pairs)
        subsets[i] = tuple(singles) + tuple(pairs)
    return Witness(subsets)


def _sorted(servers: list[Server]) -> list[Server]:
    return sorted(servers, key=Server.sort_key)


# -- 1 < s <= 2: minimum number of servers -----------------------------------


@dataclass(frozen=True)
class SmallSParams:
    t: int
    d: int
    p: int
    omega: int
    omega1: int
    omega2: int
    d1: int
    d2: int
    mu: int
    m: int
    k: int

    @property
    def special_sigma_index(self) -> int:
        """Index of the second Sigma-server family that can lose edges."""
        return self.mu * self.omega1 - self.d1 * (self.d2 - 1)


def small_s_params(t: int, d: int) -> SmallSParams:
    if t < 2 or not 1 <= d <= t:
        raise ValueError(f"need t >= 2 and 1 <= d <= t, got t={t}, d={d}")
    if t <= d * d - d:
        raise ValueError(f"need t > d^2 - d = {d * d - d}, got t={t}")
    p = t + d
    omega = gcd(d * d + d, p * (2 * d + 1))
    omega1, omega2 = gcd(omega, d), gcd(omega, d + 1)
    num = d * d + 2 * t * d + t
    if omega1 * omega2 != omega or p % omega or num % omega:
        raise ConstructionError(f"integrality failed for t={t}, d={d}")
    mu = p // omega
    return SmallSParams(t, d, p, omega, omega1, omega2, d // omega1, (d + 1) // omega2,
                        mu, mu * (2 * d + 1), num // omega)


def small_s_sets(prm: SmallSParams) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """The missing-item sets ``A_j`` and summation supports ``B_j``."""
    p, mu = prm.p, prm.mu
    a_sets = [frozenset((j + a + b * mu * prm.omega2) % p
                        for a in range(prm.d1) for b in range(prm.omega1))
              for j in range(mu * prm.omega2)]
    b_sets = [frozenset((j + g * prm.d1 + lam * mu * prm.omega1) % p
                        for g in range(prm.d2) for lam in range(prm.omega2))
              for j in range(mu * prm.omega1)]
    return a_sets, b_sets


def _small_s_servers(prm: SmallSParams, q: int) -> tuple[list[Server], dict[Server, tuple[str, int]]]:
    a_sets, b_sets = small_s_sets(prm)
    everything = frozenset(range(prm.p))
    label: dict[Server, tuple[str, int]] = {}
    servers = []
    for j, a in enumerate(a_sets):
        srv = make_singleton_server(everything - a, prm.p, prm.t, q)
        label[srv] = ("A", j)
        servers += [srv] * prm.d2
    for j, b in enumerate(b_sets):
        srv = make_sigma_server(everything - b, b, prm.p, q)
        label[srv] = ("B", j)
        servers += [srv] * prm.d1
    return _sorted(servers), label


def small_s_item_graph(prm: SmallSParams, i: int, q: int = 2) -> tuple[ItemGraph, list[Server]]:
    """Per-item graph: singleton servers missing ``x_i`` vs Sigma-servers summing it.

    An edge joins ``A_j``'s server and ``B_l``'s server iff ``A_j & B_l == {i}``.
    """
    servers, label = _small_s_servers(prm, q)
    return _small_s_graph(servers, label, prm, i), servers


def _small_s_graph(servers, label, prm, i) -> ItemGraph:
    a_sets, b_sets = small_s_sets(prm)
    hits = [j for j, a in enumerate(a_sets) if i in a]

    def left_keys(c):
        return (label[servers[c]][1],)

    def right_keys(c):
        b = b_sets[label[servers[c]][1]]
        return [j for j in hits if a_sets[j] & b == {i}]

    return _item_graph(servers, i, left_keys, right_keys)


def construct_small_s(t: int, d: int, q: int = 2) -> tuple[ArrayCode, Witness]:
    """Optimal-rate code for ``s = 1 + d/t`` with ``m = (t+d)(2d+1)/omega`` servers."""
    prm = small_s_params(t, d)
    servers, label = _small_s_servers(prm, q)
    witness = _witness(servers, prm.p, lambda i: _small_s_graph(servers, label, prm, i))
    return ArrayCode.from_servers(servers, prm.p, q), witness


# -- s > 2: layered and modified constructions --------------------------------


def _type_j_servers(p: int, t: int, j: int, q: int) -> list[Server]:
    out = []
    for z in combinations(range(p), t - 1):
        rest = [y for y in range(p) if y not in z]
        for b in combinations(rest, j):
            out.append(make_sigma_server(z, b, p, q))
    return out


def _singleton_servers(p: int, t: int, q: int) -> list[Server]:
    return [make_singleton_server(y, p, t, q) for y in combinations(range(p), t)]


def _check_integer_s(s, t: int, lowest: int) -> int:
    if isinstance(s, Fraction):
        if s.denominator != 1:
            raise UnsupportedParameterError(f"non-integer s={s} is not supported")
        s = int(s)
    if not isinstance(s, int):
        raise UnsupportedParameterError(f"s must be an integer, got {s!r}")
    if s < lowest:
        raise ValueError(f"need integer s >= {lowest}, got {s}")
    if t < 2:
        raise ValueError(f"need t >= 2, got {t}")
    return s


@dataclass(frozen=True)
class BEMultiplicities:
    s: int
    t: int
    etas: tuple[int, ...]


def be_multiplicities(s: int, t: int) -> BEMultiplicities:
    """Smallest positive copy counts that balance every layer graph.

    Layer 1 balances when ``eta_1 : eta_2 = C(p-t-1, t-1) : 1``; layer ``r``
    (``r >= 2``) when ``eta_r : eta_{r+1} = C(p-rt-1, t-1) : C(rt, t-1)``.
    """
    s = _check_integer_s(s, t, 3)
    p = s * t
    ratios = [Fraction(1)]
    for r in range(1, s):
        if r == 1:
            step = Fraction(1, comb(p - t - 1, t - 1))
        else:
            step = Fraction(comb(r * t, t - 1), comb(p - r * t - 1, t - 1))
        ratios.append(ratios[-1] * step)
    scale = lcm(*(x.denominator for x in ratios))
    ints = [int(x * scale) for x in ratios]
    g = gcd(*ints)
    return BEMultiplicities(s, t, tuple(x // g for x in ints))


def be_column_count(s: int, t: int) -> int:
    p = s * t
    etas = be_multiplicities(s, t).etas
    m = comb(p, t) * etas[0]
    for r in range(2, s + 1):
        m += comb(p, t - 1) * comb(p - t + 1, (r - 1) * t + 1) * etas[r - 1]
    return m


def construct_be(s: int, t: int, q: int = 2, max_columns: int | None = None) -> tuple[ArrayCode, Witness]:
    """Layered code: every server of type ``(r-1)t+1`` for ``r = 1..s``, ``eta_r`` copies each.

    A server missing ``x_i`` entirely pairs with a server one layer up whose
    summation cell covers exactly its items plus ``x_i``.
    """
    s = _check_integer_s(s, t, 3)
    limit = max_columns_default() if max_columns is None else max_columns
    m = be_column_count(s, t)
    if m > limit:
        raise SizeGuardExceeded("be", m, limit)
    p = s * t
    etas = be_multiplicities(s, t).etas
    servers = []
    for srv in _singleton_servers(p, t, q):
        servers += [srv] * etas[0]
    for r in range(2, s + 1):
        for srv in _type_j_servers(p, t, (r - 1) * t + 1, q):
            servers += [srv] * etas[r - 1]
    servers = _sorted(servers)

    def graph_for(i):
        def left_keys(c):
            srv = servers[c]
            return (srv.singletons | srv.sum_set,)

        def right_keys(c):
            return (servers[c].sum_set - {i},)

        return _item_graph(servers, i, left_keys, right_keys)

    return ArrayCode.from_servers(servers, p, q), _witness(servers, p, graph_for)


def modified_column_count(s: int, t: int) -> int:
    p = s * t
    m = comb(p, t) * comb(p - t - 1, t - 1)
    for j in range(t + 1, p - t + 2):
        m += comb(p, t - 1) * comb(p - t + 1, j)
    return m


def construct_modified(s: int, t: int, q: int = 2, max_columns: int | None = None) -> tuple[ArrayCode, Witness]:
    """All singleton servers ``C(p-t-1, t-1)`` times plus every type-j server once, ``t+1 <= j <= p-t+1``."""
    s = _check_integer_s(s, t, 3)
    limit = max_columns_default() if max_columns is None else max_columns
    m = modified_column_count(s, t)
    if m > limit:
        raise SizeGuardExceeded("modified", m, limit)
    p = s * t
    delta = comb(p - t - 1, t - 1)
    servers = []
    for srv in _singleton_servers(p, t, q):
        servers += [srv] * delta
    for j in range(t + 1, p - t + 2):
        servers += _type_j_servers(p, t, j, q)
    servers = _sorted(servers)

    def graph_for(i):
        def left_keys(c):
            srv = servers[c]
            if srv.kind == SINGLETON:
                return (("bare", srv.singletons),)
            return (("same-singletons", srv.singletons, srv.sum_set),)

        def right_keys(c):
            srv = servers[c]
            rest = srv.sum_set - {i}
            if len(srv.sum_set) == t + 1:
                return (("bare", rest),)
            return (("same-singletons", srv.singletons, rest),)

        return _item_graph(servers, i, left_keys, right_keys)

    return ArrayCode.from_servers(servers, p, q), _witness(servers, p, graph_for)


# -- the 3x6 introductory code ------------------------------------------------


def intro_example_code(q: int = 2) -> tuple[ArrayCode, Witness]:
    """The cyclic ``[3 x 6, 6]`` 4-PIR code; column ``c`` holds ``x_c, x_{c+1}, x_{c+2}+x_{c+3}``."""
    p = 6
    servers = []
    for c in range(p):
        # keep the fixed cell order; make_sigma_server would sort the singletons
        z, b = (c, (c + 1) % p), ((c + 2) % p, (c + 3) % p)
        cells = (unit_vector(z[0], p), unit_vector(z[1], p), indicator(b, p))
        servers.append(Server(cells, TYPE_J, frozenset(z), frozenset(b)))
    base = ((0,), (5,), (1, 4), (2, 3))
    witness = Witness({i: tuple(tuple(sorted((c + i) % p for c in sub)) for sub in base) for i in range(p)})
    return ArrayCode.from_servers(servers, p, q), witness
