"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately use different algorithms from the library
(plain recursion over edge lists, no memoization, no bit tricks beyond
vertex masks) so that test expectations are computed independently.
"""
from __future__ import annotations

import random
from itertools import combinations

import pytest

from specmatch.graph import Graph, from_edges


def brute_max_matching_size(g: Graph) -> int:
    edges = g.edges()
    best = 0

    def rec(i: int, used: int, size: int):
        nonlocal best
        if size > best:
            best = size
        for j in range(i, len(edges)):
            u, v = edges[j]
            m = (1 << u) | (1 << v)
            if not used & m:
                rec(j + 1, used | m, size + 1)

    rec(0, 0, 0)
    return best


def brute_has_perfect_matching(g: Graph) -> bool:
    return g.n % 2 == 0 and 2 * brute_max_matching_size(g) == g.n


def brute_is_k_extendable(g: Graph, k: int) -> bool:
    """Direct transcription of the definition, no shortcuts."""
    if g.n % 2:
        return False
    edges = g.edges()
    k_matchings = []
    for combo in combinations(edges, k):
        used = 0
        ok = True
        for u, v in combo:
            m = (1 << u) | (1 << v)
            if used & m:
                ok = False
                break
            used |= m
        if ok:
            k_matchings.append((combo, used))
    if not k_matchings:
        return False
    for combo, used in k_matchings:
        rest = [v for v in range(g.n) if not (used >> v) & 1]
        if not brute_has_perfect_matching(g.induced(rest)):
            return False
    return True


def petersen() -> Graph:
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, i + 5))
        edges.append((5 + i, 5 + (i + 2) % 5))
    return from_edges(10, edges)


def seeded_random_graph(seed: int, n: int, p: float) -> Graph:
    rng = random.Random(seed)
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return Graph(n, tuple(adj))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
