"""Maximum-cardinality bipartite matching (Hopcroft-Karp)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

_INF = float("inf")


@dataclass(frozen=True)
class BipartiteGraph:
    left_size: int
    right_size: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, left_size: int, right_size: int, edges: Iterable[tuple[int, int]] = ()):
        es = frozenset((int(u), int(v)) for u, v in edges)
        for u, v in es:
            if not (0 <= u < left_size and 0 <= v < right_size):
                raise ValueError(f"edge {(u, v)} outside {left_size}x{right_size}")
        object.__setattr__(self, "left_size", left_size)
        object.__setattr__(self, "right_size", right_size)
        object.__setattr__(self, "edges", es)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.left_size)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
        return adj


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def max_matching(g: BipartiteGraph) -> Matching:
    """Maximum matching via Hopcroft-Karp.

    Adjacency lists are scanned in increasing index order and free left
    vertices in increasing order, so the result is a pure function of ``g``.
    """
    adj = g.adjacency()
    match_l = [-1] * g.left_size
    match_r = [-1] * g.right_size
    dist = [0.0] * g.left_size

    def bfs() -> bool:
        queue = deque()
        for u in range(g.left_size):
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(root: int) -> bool:
        # iterative layered DFS; recursion would overflow on long paths
        stack = [(root, iter(adj[root]))]
        path: list[tuple[int, int]] = []
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                w = match_r[v]
                if w < 0:
                    path.append((u, v))
                    for a, b in path:
                        match_l[a] = b
                        match_r[b] = a
                    return True
                if dist[w] == dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[u] = _INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(g.left_size):
            if match_l[u] < 0:
                dfs(u)
    return Matching(tuple((u, v) for u, v in enumerate(match_l) if v >= 0))


def is_perfect(g: BipartiteGraph, matching: Matching) -> bool:
    return g.left_size == g.right_size == len(matching)
