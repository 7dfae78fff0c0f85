"""Exact matchings, extendability and factor criteria, flow-based factor
construction, perfect-matching decomposition and Hamilton-cycle search.

Every negative verdict carries a certificate that re-validates against the
host graph by an independent recomputation (see ``validate_certificate``).
Violating-set certificates are excess-maximal: among all witnesses the one
with the largest violation is returned, ties broken by the
lexicographically least vertex list.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .graph import (Graph, GraphError, SIDE_A, SIDE_B, bits, component_masks,
                    is_connected, mask_of)

EXHAUSTIVE_LIMIT = 20
GENERAL_MATCHING_LIMIT = 24
HAMILTON_LIMIT = 20
CONNECTED_FACTOR_LIMIT = 16
CONNECTED_FACTOR_BUDGET = 500_000

CERTIFICATE_KINDS = frozenset({
    "ViolatingSetS", "ViolatingSubsetX", "FactorSubgraph",
    "MatchingList", "HamCycle", "FailingMatching",
})


@dataclass
class Certificate:
    kind: str
    payload: dict

    def __post_init__(self):
        if self.kind not in CERTIFICATE_KINDS:
            raise GraphError(f"unknown certificate kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "payload": self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":"))


@dataclass(frozen=True)
class Matching:
    edges: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.edges)

    def vertex_mask(self) -> int:
        m = 0
        for u, v in self.edges:
            m |= (1 << u) | (1 << v)
        return m

    def validate(self, g: Graph) -> None:
        seen = 0
        for u, v in self.edges:
            if not g.has_edge(u, v):
                raise GraphError(f"({u},{v}) is not an edge")
            pair = (1 << u) | (1 << v)
            if seen & pair:
                raise GraphError(f"({u},{v}) shares a vertex")
            seen |= pair


def matching_of(pairs: Sequence[tuple[int, int]]) -> Matching:
    edges = tuple(sorted((min(u, v), max(u, v)) for u, v in pairs))
    return Matching(edges)


@dataclass(frozen=True)
class FactorSpec:
    targets: tuple[int, ...]

    def __post_init__(self):
        if any(t < 0 for t in self.targets):
            raise GraphError("factor targets must be nonnegative")

    @staticmethod
    def constant(n: int, k: int) -> "FactorSpec":
        return FactorSpec((k,) * n)


# -- maximum matchings ---------------------------------------------------


def max_matching_bipartite(g: Graph) -> Matching:
    """Maximum matching of a bipartite graph via augmenting paths."""
    if g.sides is None:
        raise GraphError("bipartite matching needs a bipartition")
    match = [-1] * g.n

    def augment(a: int, seen: set[int]) -> bool:
        for b in bits(g.adj[a]):
            if b in seen:
                continue
            seen.add(b)
            if match[b] == -1 or augment(match[b], seen):
                match[b] = a
                match[a] = b
                return True
        return False

    for a in range(g.n):
        if g.sides[a] == SIDE_A and match[a] == -1:
            augment(a, set())
    return matching_of([(a, match[a]) for a in range(g.n)
                        if g.sides[a] == SIDE_A and match[a] != -1])


def _max_matching_value(adj: Sequence[int], mask: int,
                        memo: dict[int, int]) -> int:
    cached = memo.get(mask)
    if cached is not None:
        return cached
    v = -1
    m = mask
    while m:
        b = m & -m
        cand = b.bit_length() - 1
        if adj[cand] & mask:
            v = cand
            break
        m ^= b
        mask ^= b  # drop isolated vertices from the state
        cached = memo.get(mask)
        if cached is not None:
            return cached
    if v == -1:
        memo[mask] = 0
        return 0
    cap = mask.bit_count() // 2
    best = 0
    nb = adj[v] & mask
    while nb:
        b = nb & -nb
        nb ^= b
        r = 1 + _max_matching_value(adj, mask ^ (1 << v) ^ b, memo)
        if r > best:
            best = r
            if best == cap:
                memo[mask] = best
                return best
    r = _max_matching_value(adj, mask ^ (1 << v), memo)
    if r > best:
        best = r
    memo[mask] = best
    return best


def max_matching_general(g: Graph,
                         limit: int = GENERAL_MATCHING_LIMIT) -> Matching:
    """Exact maximum matching of any graph by memoized branch and bound."""
    if g.n > limit:
        raise GraphError(f"general matching limited to n <= {limit}")
    memo: dict[int, int] = {}
    adj = g.adj
    best = _max_matching_value(adj, g.full_mask(), memo)
    # deterministic reconstruction: smallest active vertex, smallest partner
    edges = []
    mask = g.full_mask()
    remaining = best
    while remaining:
        v = -1
        for cand in bits(mask):
            if adj[cand] & mask:
                v = cand
                break
        matched = False
        for u in bits(adj[v] & mask):
            nxt = mask ^ (1 << v) ^ (1 << u)
            if 1 + _max_matching_value(adj, nxt, memo) == remaining:
                edges.append((v, u))
                mask = nxt
                remaining -= 1
                matched = True
                break
        if not matched:
            mask ^= 1 << v
    return matching_of(edges)


def max_matching(g: Graph, limit: int = GENERAL_MATCHING_LIMIT) -> Matching:
    if g.sides is not None:
        return max_matching_bipartite(g)
    return max_matching_general(g, limit)


def has_perfect_matching(g: Graph,
                         limit: int = GENERAL_MATCHING_LIMIT) -> bool:
    if g.n % 2:
        return False
    return 2 * max_matching(g, limit).size == g.n


def _has_pm_mask(adj: Sequence[int], mask: int, memo: dict[int, int]) -> bool:
    size = mask.bit_count()
    if size % 2:
        return False
    return _max_matching_value(adj, mask, memo) * 2 == size


def _k_disjoint_edges(adj: Sequence[int], mask: int,
                      k: int) -> list[tuple[int, int]] | None:
    """Some k pairwise disjoint edges inside ``mask``, or None."""
    if k == 0:
        return []
    m = mask
    while m:
        b = m & -m
        v = b.bit_length() - 1
        if adj[v] & mask:
            break
        m ^= b
        mask ^= b
    else:
        return None
    nb = adj[v] & mask
    while nb:
        b = nb & -nb
        nb ^= b
        rest = _k_disjoint_edges(adj, mask ^ (1 << v) ^ b, k - 1)
        if rest is not None:
            return [(v, b.bit_length() - 1)] + rest
    return _k_disjoint_edges(adj, mask ^ (1 << v), k)


def iter_k_matchings(g: Graph, k: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All matchings of size k, in lexicographic order of their edge lists."""
    edges = g.edges()
    m = len(edges)

    def rec(start: int, chosen: list, used: int):
        if len(chosen) == k:
            yield tuple(chosen)
            return
        for i in range(start, m - (k - len(chosen)) + 1):
            u, v = edges[i]
            pair = (1 << u) | (1 << v)
            if used & pair:
                continue
            chosen.append(edges[i])
            yield from rec(i + 1, chosen, used | pair)
            chosen.pop()

    yield from rec(0, [], 0)


# -- odd components on raw bitsets (hot path) ----------------------------


def _odd_components(adj: Sequence[int], alive: int) -> int:
    cnt = 0
    rest = alive
    while rest:
        comp = rest & -rest
        frontier = comp
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= adj[b.bit_length() - 1]
                f ^= b
            nxt &= rest & ~comp
            comp |= nxt
            frontier = nxt
        rest &= ~comp
        if comp.bit_count() & 1:
            cnt += 1
    return cnt


# -- k-extendability -----------------------------------------------------


def _require_extendable_input(g: Graph, k: int) -> None:
    if k < 1:
        raise GraphError(
            "k must be >= 1; use has_perfect_matching for the base case")
    if g.n % 2:
        raise GraphError("extendability needs even order")
    if not is_connected(g):
        raise GraphError("extendability checkers need a connected graph")


def _no_k_matching_certificate(g: Graph, k: int,
                               limit: int) -> Certificate:
    mm = max_matching(g, limit)
    return Certificate("FailingMatching", {
        "reason": "no-size-k-matching",
        "k": k,
        "max_matching": [list(e) for e in mm.edges],
    })


def is_k_extendable_definitional(
        g: Graph, k: int,
        limit: int = GENERAL_MATCHING_LIMIT) -> tuple[bool, Certificate | None]:
    """Directly: a size-k matching exists and each one extends to a perfect
    matching. The first failing matching (lex order) is certified."""
    _require_extendable_input(g, k)
    if g.n > limit:
        raise GraphError(f"definitional check limited to n <= {limit}")
    if max_matching(g, limit).size < k:
        return False, _no_k_matching_certificate(g, k, limit)
    memo: dict[int, int] = {}
    full = g.full_mask()
    for m_edges in iter_k_matchings(g, k):
        used = 0
        for u, v in m_edges:
            used |= (1 << u) | (1 << v)
        if not _has_pm_mask(g.adj, full ^ used, memo):
            return False, Certificate("FailingMatching", {
                "k": k,
                "matching": [list(e) for e in m_edges],
            })
    return True, None


def is_k_extendable_chen(
        g: Graph, k: int,
        limit: int = EXHAUSTIVE_LIMIT) -> tuple[bool, Certificate | None]:
    """Odd-component criterion over all vertex sets spanning k disjoint
    edges; exhaustive, order <= ``limit``."""
    _require_extendable_input(g, k)
    if g.n > limit:
        raise GraphError(f"criterion enumeration limited to n <= {limit}")
    if max_matching(g, min(g.n, GENERAL_MATCHING_LIMIT)).size < k:
        return False, _no_k_matching_certificate(g, k, GENERAL_MATCHING_LIMIT)
    n = g.n
    adj = g.adj
    full = g.full_mask()
    best_key = None
    best = None
    for mask in range(1, 1 << n):
        size = mask.bit_count()
        if size < 2 * k:
            continue
        if n - size <= size - 2 * k:
            continue  # too few leftover vertices for any violation
        o = _odd_components(adj, full & ~mask)
        excess = o - (size - 2 * k)
        if excess <= 0:
            continue
        if _k_disjoint_edges(adj, mask, k) is None:
            continue
        key = (-excess, tuple(bits(mask)))
        if best_key is None or key < best_key:
            best_key = key
            best = (mask, o, excess)
    if best is None:
        return True, None
    mask, o, _ = best
    witness = _k_disjoint_edges(adj, mask, k)
    return False, Certificate("ViolatingSetS", {
        "criterion": "extendability",
        "k": k,
        "set": list(bits(mask)),
        "odd_components": o,
        "witness_edges": [sorted(e) for e in witness],
    })


def _neighborhood_mask(adj: Sequence[int], x_mask: int) -> int:
    out = 0
    for v in bits(x_mask):
        out |= adj[v]
    return out


def _plummer_enumerate(g: Graph, a_verts: list[int], k: int):
    q = len(a_verts)
    best_key = None
    best = None
    for r in range(1, q - k + 1):
        for comb in combinations(a_verts, r):
            x_mask = mask_of(comb)
            nbh = _neighborhood_mask(g.adj, x_mask)
            excess = (r + k) - nbh.bit_count()
            if excess <= 0:
                continue
            key = (-excess, comb)
            if best_key is None or key < best_key:
                best_key = key
                best = (comb, nbh)
    if best is None:
        return True, None
    comb, nbh = best
    return False, Certificate("ViolatingSubsetX", {
        "criterion": "extendability",
        "k": k,
        "subset": list(comb),
        "neighborhood": list(bits(nbh)),
    })


def _plummer_surplus(g: Graph, a_verts: list[int], b_verts: list[int],
                     k: int):
    """Polynomial surplus route: neighborhood expansion by at least k for
    every admissible subset of side A, tested by saturating matchings with
    one A-vertex replicated k extra times inside each co-neighborhood."""
    q = len(a_verts)
    a_mask = mask_of(a_verts)
    adj = g.adj
    for b in b_verts:
        if adj[b].bit_count() <= k:
            pool = [a for a in a_verts if not (adj[b] >> a) & 1]
            x = pool[:q - k]
            nbh = _neighborhood_mask(adj, mask_of(x))
            return False, Certificate("ViolatingSubsetX", {
                "criterion": "extendability",
                "k": k,
                "subset": sorted(x),
                "neighborhood": list(bits(nbh)),
            })
    for b in b_verts:
        a_pool = [a for a in a_verts if not (adj[b] >> a) & 1]
        if not a_pool:
            continue
        for a in a_pool:
            bad = _replicated_hall_failure(adj, a_pool, a, k)
            if bad is not None:
                nbh = _neighborhood_mask(adj, mask_of(bad))
                assert nbh.bit_count() < len(bad) + k
                return False, Certificate("ViolatingSubsetX", {
                    "criterion": "extendability",
                    "k": k,
                    "subset": sorted(bad),
                    "neighborhood": list(bits(nbh)),
                })
    return True, None


def _replicated_hall_failure(adj: Sequence[int], a_pool: list[int],
                             special: int, k: int) -> list[int] | None:
    """Try to match every unit of ``a_pool`` (with ``special`` counted k+1
    times) to distinct neighbors; on failure return the deficient A-set."""
    units = [a for a in a_pool] + [special] * k
    match_b: dict[int, int] = {}  # b vertex -> unit index
    unit_to_b = [-1] * len(units)

    def augment(i: int, seen: set[int]) -> bool:
        for b in bits(adj[units[i]]):
            if b in seen:
                continue
            seen.add(b)
            j = match_b.get(b)
            if j is None or augment(j, seen):
                match_b[b] = i
                unit_to_b[i] = b
                return True
        return False

    for i in range(len(units)):
        seen: set[int] = set()
        if not augment(i, seen):
            deficient = {units[i]}
            for b in seen:
                deficient.add(units[match_b[b]])
            return sorted(deficient)
    return None


def is_k_extendable_plummer(
        g: Graph, k: int,
        enum_limit: int = EXHAUSTIVE_LIMIT) -> tuple[bool, Certificate | None]:
    """Neighborhood-surplus criterion for bipartite graphs.

    Runs the polynomial surplus route always and the subset enumeration when
    side A has at most ``enum_limit`` vertices; the two must agree.
    Unbalanced sides yield an immediate negative with a size certificate.
    """
    if g.sides is None:
        raise GraphError("criterion needs a bipartition")
    if k < 1:
        raise GraphError(
            "k must be >= 1; use has_perfect_matching for the base case")
    a_verts = g.side_vertices(SIDE_A)
    b_verts = g.side_vertices(SIDE_B)
    if len(a_verts) != len(b_verts):
        larger = a_verts if len(a_verts) > len(b_verts) else b_verts
        return False, Certificate("ViolatingSubsetX", {
            "criterion": "extendability",
            "k": k,
            "reason": "unbalanced-sides",
            "side_sizes": [len(a_verts), len(b_verts)],
            "subset": larger,
            "neighborhood": sorted(neigh for v in larger
                                   for neigh in bits(g.adj[v])),
        })
    q = len(a_verts)
    if q == 0:
        raise GraphError("empty graph")
    if k >= q:
        # only perfect matchings are size-k matchings here (or none exist)
        mm = max_matching_bipartite(g)
        if k == q and mm.size == q:
            return True, None
        return False, Certificate("FailingMatching", {
            "reason": "no-size-k-matching",
            "k": k,
            "max_matching": [list(e) for e in mm.edges],
        })
    verdict_s, cert_s = _plummer_surplus(g, a_verts, b_verts, k)
    if q <= enum_limit:
        verdict_e, cert_e = _plummer_enumerate(g, a_verts, k)
        if verdict_e != verdict_s:
            raise RuntimeError(
                "internal: surplus and enumeration routes disagree")
        return verdict_e, cert_e
    return verdict_s, cert_s


# -- bipartite f-factors -------------------------------------------------


def _factor_targets(g: Graph, f) -> tuple[int, ...]:
    if isinstance(f, FactorSpec):
        targets = f.targets
    else:
        targets = tuple(int(t) for t in f)
    if len(targets) != g.n:
        raise GraphError("factor spec length != order")
    if any(t < 0 for t in targets):
        raise GraphError("factor targets must be nonnegative")
    return targets


def _ore_sides(g: Graph) -> tuple[list[int], list[int]]:
    if g.sides is None:
        raise GraphError("factor criteria need a bipartition")
    return g.side_vertices(SIDE_A), g.side_vertices(SIDE_B)


def _split_y(adj: Sequence[int], x_mask: int, targets,
             nbh: int) -> tuple[list[int], list[int]]:
    y1, y2 = [], []
    for y in bits(nbh):
        d_x = (adj[y] & x_mask).bit_count()
        (y1 if d_x >= targets[y] else y2).append(y)
    return y1, y2


def has_f_factor_ore(g: Graph, f,
                     enum_limit: int = EXHAUSTIVE_LIMIT
                     ) -> tuple[bool, Certificate | None]:
    """Degree-prescribed spanning subgraph criterion for bipartite graphs,
    exhaustive over subsets of side A."""
    targets = _factor_targets(g, f)
    a_verts, b_verts = _ore_sides(g)
    sum_a = sum(targets[v] for v in a_verts)
    sum_b = sum(targets[v] for v in b_verts)
    if sum_a != sum_b:
        heavier = a_verts if sum_a > sum_b else b_verts
        return False, Certificate("ViolatingSubsetX", {
            "criterion": "f-factor",
            "reason": "target-sum-mismatch",
            "sums": [sum_a, sum_b],
            "targets": list(targets),
            "subset": heavier,
            "neighborhood": [],
        })
    if len(a_verts) > enum_limit:
        raise GraphError(
            f"criterion enumeration limited to |A| <= {enum_limit}")
    adj = g.adj
    best_key = None
    best = None
    for r in range(1, len(a_verts) + 1):
        for comb in combinations(a_verts, r):
            x_mask = mask_of(comb)
            lhs = sum(targets[v] for v in comb)
            nbh = _neighborhood_mask(adj, x_mask)
            rhs = sum(min(targets[y], (adj[y] & x_mask).bit_count())
                      for y in bits(nbh))
            excess = lhs - rhs
            if excess <= 0:
                continue
            key = (-excess, comb)
            if best_key is None or key < best_key:
                best_key = key
                best = (comb, x_mask, lhs, rhs, nbh)
    if best is None:
        return True, None
    comb, x_mask, lhs, rhs, nbh = best
    y1, y2 = _split_y(adj, x_mask, targets, nbh)
    return False, Certificate("ViolatingSubsetX", {
        "criterion": "f-factor",
        "targets": list(targets),
        "subset": list(comb),
        "neighborhood": list(bits(nbh)),
        "lhs": lhs,
        "rhs": rhs,
        "y_saturated": y1,
        "y_deficient": y2,
    })


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> int:
        idx = len(self.to)
        self.head[u].append(idx)
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(idx + 1)
        self.to.append(u)
        self.cap.append(0)
        return idx

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for e in self.head[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == -1:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] == -1:
                return flow
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    e = self.head[u][it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[e]))
                        if got:
                            self.cap[e] -= got
                            self.cap[e ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if not pushed:
                    break
                flow += pushed

    def reachable_from(self, s: int) -> set[int]:
        seen = {s}
        queue = [s]
        for u in queue:
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen


def _f_factor_flow(g: Graph, targets) -> tuple[bool, list[tuple[int, int]] | list[int]]:
    """Max-flow route; returns (True, factor edges) or (False, violating X)."""
    a_verts, b_verts = _ore_sides(g)
    pos = {v: i for i, v in enumerate(a_verts + b_verts)}
    net = _Dinic(2 + g.n)
    s, t = 0, 1 + g.n
    for a in a_verts:
        net.add(s, 1 + pos[a], targets[a])
    edge_arcs = []
    for a in a_verts:
        for b in bits(g.adj[a]):
            edge_arcs.append((a, b, net.add(1 + pos[a], 1 + pos[b], 1)))
    for b in b_verts:
        net.add(1 + pos[b], t, targets[b])
    want = sum(targets[a] for a in a_verts)
    got = net.max_flow(s, t)
    if got == want:
        edges = sorted((min(a, b), max(a, b))
                       for a, b, e in edge_arcs if net.cap[e] == 0)
        return True, edges
    reach = net.reachable_from(s)
    x = sorted(a for a in a_verts if 1 + pos[a] in reach)
    return False, x


def find_k_factor_flow(g: Graph, k: int) -> tuple[bool, Certificate | None]:
    """k-regular spanning subgraph of a balanced bipartite graph by max
    flow; agrees with the exhaustive criterion and certifies both ways."""
    if k < 0:
        raise GraphError("k must be nonnegative")
    a_verts, b_verts = _ore_sides(g)
    if len(a_verts) != len(b_verts):
        raise GraphError("flow factor needs balanced sides")
    if k == 0:
        return True, Certificate("FactorSubgraph", {"k": 0, "edges": []})
    targets = FactorSpec.constant(g.n, k).targets
    ok, data = _f_factor_flow(g, targets)
    if ok:
        return True, Certificate("FactorSubgraph", {
            "k": k,
            "edges": [list(e) for e in data],
        })
    x_mask = mask_of(data)
    nbh = _neighborhood_mask(g.adj, x_mask)
    lhs = k * len(data)
    rhs = sum(min(k, (g.adj[y] & x_mask).bit_count()) for y in bits(nbh))
    y1, y2 = _split_y(g.adj, x_mask, targets, nbh)
    return False, Certificate("ViolatingSubsetX", {
        "criterion": "k-factor",
        "targets": list(targets),
        "subset": list(data),
        "neighborhood": list(bits(nbh)),
        "lhs": lhs,
        "rhs": rhs,
        "y_saturated": y1,
        "y_deficient": y2,
    })


def decompose_edge_disjoint_pms(h: Graph) -> list[Matching]:
    """Split a k-regular balanced bipartite graph into k edge-disjoint
    perfect matchings by repeated extraction."""
    a_verts, b_verts = _ore_sides(h)
    if len(a_verts) != len(b_verts):
        raise GraphError("decomposition needs balanced sides")
    degs = set(h.degrees())
    if len(degs) > 1:
        raise GraphError("decomposition needs a regular graph")
    k = degs.pop() if degs else 0
    q = len(a_verts)
    out = []
    work = h
    for _ in range(k):
        mm = max_matching_bipartite(work)
        if mm.size != q:
            raise GraphError(
                "internal: regular bipartite graph without perfect matching")
        out.append(mm)
        work = work.without_edges(mm.edges)
    if work.m != 0:
        raise GraphError("internal: leftover edges after decomposition")
    return out


# -- factor criticality --------------------------------------------------


def is_k_factor_critical(
        g: Graph, k: int,
        limit: int = EXHAUSTIVE_LIMIT) -> tuple[bool, Certificate | None]:
    """Odd-component criterion over all sets of size >= k, cross-checked
    against the definition (each size-k deletion leaves a perfect matching)."""
    if k < 1:
        raise GraphError(
            "k must be >= 1; use has_perfect_matching for the base case")
    if g.n > limit:
        raise GraphError(f"criterion enumeration limited to n <= {limit}")
    if k > g.n:
        raise GraphError("k exceeds the order")
    n = g.n
    adj = g.adj
    full = g.full_mask()
    best_key = None
    best = None
    for mask in range(1 << n):
        size = mask.bit_count()
        if size < k:
            continue
        if n - size <= size - k:
            continue
        o = _odd_components(adj, full & ~mask)
        excess = o - (size - k)
        if excess <= 0:
            continue
        key = (-excess, tuple(bits(mask)))
        if best_key is None or key < best_key:
            best_key = key
            best = (mask, o)
    # definitional route for the cross-check
    memo: dict[int, int] = {}
    definitional = all(
        _has_pm_mask(adj, full ^ mask_of(comb), memo)
        for comb in combinations(range(n), k))
    criterion = best is None and g.n % 2 == k % 2
    if criterion != definitional:
        raise RuntimeError(
            "internal: criterion and definitional routes disagree")
    if criterion:
        return True, None
    if best is None:
        # parity mismatch; any size-k deletion leaves an odd component
        mask = mask_of(range(k))
        best = (mask, _odd_components(adj, full & ~mask))
    mask, o = best
    return False, Certificate("ViolatingSetS", {
        "criterion": "factor-critical",
        "k": k,
        "set": list(bits(mask)),
        "odd_components": o,
    })


# -- Hamilton cycles -----------------------------------------------------


def hamiltonian_cycle(
        g: Graph, limit: int = HAMILTON_LIMIT) -> tuple[bool, Certificate | None]:
    """Backtracking Hamilton-cycle search on balanced bipartite graphs with
    degree and connectivity pruning."""
    if g.sides is None:
        raise GraphError("search expects a bipartite graph")
    if g.n > limit:
        raise GraphError(f"search limited to n <= {limit}")
    n = g.n
    if n < 4 or n % 2:
        return False, None
    if len(g.side_vertices(SIDE_A)) != len(g.side_vertices(SIDE_B)):
        return False, None
    if min(g.degrees()) < 2:
        return False, None
    if not is_connected(g):
        return False, None
    adj = g.adj
    full = g.full_mask()
    path = [0]

    def feasible(visited: int, current: int) -> bool:
        open_mask = (full & ~visited) | (1 << current) | 1
        rest = full & ~visited
        for v in bits(rest):
            if (adj[v] & open_mask).bit_count() < 2:
                return False
        # unvisited region plus the current endpoint must stay connected
        region = rest | (1 << current)
        comp = 1 << current
        frontier = comp
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= region & ~comp
            comp |= nxt
            frontier = nxt
        return comp == region

    def extend(visited: int) -> bool:
        current = path[-1]
        if len(path) == n:
            return bool((adj[current] >> 0) & 1)
        if not feasible(visited, current):
            return False
        for u in bits(adj[current] & ~visited):
            path.append(u)
            if extend(visited | (1 << u)):
                return True
            path.pop()
        return False

    if extend(1):
        return True, Certificate("HamCycle", {"cycle": list(path)})
    return False, None


# -- connected factor exploration ----------------------------------------


def connected_k_factor_search(
        g: Graph, k: int,
        limit: int = CONNECTED_FACTOR_LIMIT,
        budget: int = CONNECTED_FACTOR_BUDGET
        ) -> tuple[bool | None, Certificate | None]:
    """Exhaustive (budgeted) search for a connected k-factor.

    Returns (True, factor), (False, certificate-or-None) when the factor
    space was exhausted, or (None, None) when the node budget ran out.
    """
    if k < 1:
        raise GraphError("search needs k >= 1")
    if g.n > limit:
        raise GraphError(f"search limited to n <= {limit}")
    a_verts, b_verts = _ore_sides(g)
    if len(a_verts) != len(b_verts):
        raise GraphError("search needs balanced sides")
    ok, cert = find_k_factor_flow(g, k)
    if not ok:
        return False, cert
    edges = [tuple(e) for e in cert.payload["edges"]]
    if _edges_connected(g.n, edges):
        return True, cert
    nodes = 0
    caps = [0] * g.n
    for b in b_verts:
        caps[b] = k
    chosen: list[tuple[int, int]] = []
    q = len(a_verts)

    class _Found(Exception):
        pass

    class _Budget(Exception):
        pass

    def rec(i: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        if i == q:
            if _edges_connected(g.n, chosen):
                raise _Found
            return
        a = a_verts[i]
        avail = [b for b in bits(g.adj[a]) if caps[b] > 0]
        if len(avail) < k:
            return
        remaining_demand = k * (q - i - 1)
        for comb in combinations(avail, k):
            total_caps = sum(caps[b] for b in b_verts) - k
            if total_caps < remaining_demand:
                return
            for b in comb:
                caps[b] -= 1
                chosen.append((a, b))
            rec(i + 1)
            for b in comb:
                caps[b] += 1
                chosen.pop()

    try:
        rec(0)
    except _Found:
        return True, Certificate("FactorSubgraph", {
            "k": k,
            "edges": [sorted(e) for e in sorted(chosen)],
        })
    except _Budget:
        return None, None
    return False, None


def _edges_connected(n: int, edges: list[tuple[int, int]]) -> bool:
    if not edges:
        return n <= 1
    adj = [0] * n
    touched = 0
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        touched |= (1 << u) | (1 << v)
    if touched != (1 << n) - 1:
        return False
    comp = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= adj[v]
        nxt &= ~comp
        comp |= nxt
        frontier = nxt
    return comp == (1 << n) - 1


# -- certificate re-validation -------------------------------------------


def validate_certificate(g: Graph, cert: Certificate) -> bool:
    """Recheck a certificate against its host graph from scratch."""
    p = cert.payload
    if cert.kind == "ViolatingSetS":
        s = p["set"]
        if any(not 0 <= v < g.n for v in s):
            return False
        o = _odd_components(g.adj, g.full_mask() & ~mask_of(s))
        if o != p.get("odd_components", o):
            return False
        k = p["k"]
        if p["criterion"] == "extendability":
            if _k_disjoint_edges(g.adj, mask_of(s), k) is None:
                return False
            return o > len(s) - 2 * k
        return len(s) >= k and o > len(s) - k
    if cert.kind == "ViolatingSubsetX":
        x = p["subset"]
        if not x or any(not 0 <= v < g.n for v in x):
            return False
        nbh = _neighborhood_mask(g.adj, mask_of(x))
        if p["criterion"] == "extendability":
            k = p["k"]
            if p.get("reason") == "unbalanced-sides":
                a, b = g.side_vertices(SIDE_A), g.side_vertices(SIDE_B)
                return len(a) != len(b)
            a_count = len(g.side_vertices(SIDE_A))
            return (nbh.bit_count() < len(x) + k
                    and len(x) <= a_count - k)
        targets = p["targets"]
        if p.get("reason") == "target-sum-mismatch":
            a, b = _ore_sides(g)
            return (sum(targets[v] for v in a)
                    != sum(targets[v] for v in b))
        x_mask = mask_of(x)
        lhs = sum(targets[v] for v in x)
        rhs = sum(min(targets[y], (g.adj[y] & x_mask).bit_count())
                  for y in bits(nbh))
        return lhs > rhs
    if cert.kind == "FactorSubgraph":
        k = p["k"]
        deg = [0] * g.n
        for u, v in p["edges"]:
            if not g.has_edge(u, v):
                return False
            deg[u] += 1
            deg[v] += 1
        return all(d == k for d in deg) if k else not p["edges"]
    if cert.kind == "MatchingList":
        seen: set[tuple[int, int]] = set()
        q = g.n // 2
        for edges in p["matchings"]:
            cover = 0
            for u, v in edges:
                if not g.has_edge(u, v):
                    return False
                e = (min(u, v), max(u, v))
                if e in seen:
                    return False
                seen.add(e)
                cover |= (1 << u) | (1 << v)
            if cover != g.full_mask() or len(edges) != q:
                return False
        return len(seen) == g.m
    if cert.kind == "HamCycle":
        cyc = p["cycle"]
        if len(cyc) != g.n or len(set(cyc)) != g.n:
            return False
        return all(g.has_edge(cyc[i], cyc[(i + 1) % g.n])
                   for i in range(g.n))
    if cert.kind == "FailingMatching":
        k = p["k"]
        if p.get("reason") == "no-size-k-matching":
            return max_matching(g).size < k
        edges = [tuple(e) for e in p["matching"]]
        matching_of(edges).validate(g)
        if len(edges) != k:
            return False
        used = mask_of(v for e in edges for v in e)
        memo: dict[int, int] = {}
        return not _has_pm_mask(g.adj, g.full_mask() ^ used, memo)
    return False
