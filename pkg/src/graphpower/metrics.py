"""Degree, clique, independence, co-degree and cycle-proximity statistics
of G and its powers, computed implicitly (truncated BFS) whenever possible.

All operations are pure functions of an immutable :class:`~graphpower.graph.Graph`.
Ties in argmax reductions always go to the smallest vertex index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError
from .graph import Graph, ball

DEFAULT_NODE_BUDGET = 5_000_000
DEFAULT_CYCLE_LENGTH_CAP = 16


@dataclass
class PowerDegreeSummary:
    """Max degree of G^r with its argmax vertex and full degree histogram."""

    r: int
    delta: int
    argmax: int
    histogram: list = field(repr=False)

    @property
    def n(self):
        return int(sum(self.histogram))


def power_degree(g: Graph, v, r) -> int:
    """Degree of v in G^r, i.e. |ball(v, r)| - 1, via truncated BFS."""
    return len(ball(g, v, r)) - 1


def power_degrees(g: Graph, r) -> list:
    """Degrees in G^r for every vertex (bulk truncated BFS, stamp array)."""
    n = g.n
    adj = g.adjacency_lists()
    mark = [-1] * n
    out = [0] * n
    for v in range(n):
        mark[v] = v
        frontier = [v]
        count = 0
        for _ in range(r):
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if mark[w] != v:
                        mark[w] = v
                        nxt.append(w)
            count += len(nxt)
            if not nxt:
                break
            frontier = nxt
        out[v] = count
    return out


def power_max_degree(g: Graph, r) -> PowerDegreeSummary:
    """Exact max degree of G^r without materializing the power."""
    degs = power_degrees(g, r)
    if not degs:
        return PowerDegreeSummary(r, 0, -1, [])
    delta = max(degs)
    argmax = degs.index(delta)  # smallest index wins ties
    hist = np.bincount(np.asarray(degs, dtype=np.int64)).tolist()
    return PowerDegreeSummary(r, delta, argmax, hist)


def high_degree_set(g: Graph, r, threshold) -> list:
    """Vertices whose G^r-degree strictly exceeds the threshold."""
    degs = power_degrees(g, r)
    return [v for v, d in enumerate(degs) if d > threshold]


def clique_lower_bound(g: Graph, r) -> int:
    """Largest radius-floor(r/2) ball size: a clique in G^r.

    For r = 1 the ball argument degenerates; any edge gives a 2-clique.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if r == 1:
        return 2 if g.m > 0 else (1 if g.n > 0 else 0)
    return power_max_degree(g, r // 2).delta + 1


# -- exact clique / independence ------------------------------------------


def _adjacency_bitsets(g: Graph):
    bits = [0] * g.n
    for v, row in enumerate(g.adjacency_lists()):
        b = 0
        for w in row:
            b |= 1 << w
        bits[v] = b
    return bits


def _max_clique_bitset(n, adjbits, node_budget):
    """Branch and bound with a greedy-coloring bound (Tomita-style)."""
    best = 0
    nodes = 0

    def expand(size, cand):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError("clique node budget exceeded", lower=best)
        if cand == 0:
            if size > best:
                best = size
            return
        order = []
        bounds = []
        uncolored = cand
        color = 0
        while uncolored:
            color += 1
            q = uncolored
            while q:
                v = (q & -q).bit_length() - 1
                vbit = 1 << v
                q &= ~(adjbits[v] | vbit)
                uncolored &= ~vbit
                order.append(v)
                bounds.append(color)
        for i in range(len(order) - 1, -1, -1):
            if size + bounds[i] <= best:
                return
            v = order[i]
            expand(size + 1, cand & adjbits[v])
            cand &= ~(1 << v)

    if n == 0:
        return 0
    expand(0, (1 << n) - 1)
    return best


def max_clique_exact(g: Graph, node_budget=DEFAULT_NODE_BUDGET) -> int:
    """Exact clique number; raises BudgetExceededError past the node budget."""
    return _max_clique_bitset(g.n, _adjacency_bitsets(g), node_budget)


def independence_number(g: Graph, mode="exact", node_budget=DEFAULT_NODE_BUDGET) -> int:
    """Independence number, exact (clique on the implicit complement) or a
    min-degree greedy lower bound (always valid, any size)."""
    n = g.n
    if mode == "greedy":
        return len(greedy_independent_set(g))
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    full = (1 << n) - 1
    comp = [full ^ b ^ (1 << v) for v, b in enumerate(_adjacency_bitsets(g))]
    return _max_clique_bitset(n, comp, node_budget)


def greedy_independent_set(g: Graph) -> list:
    """Min-degree greedy independent set (smallest index breaks ties)."""
    n = g.n
    adj = [set(row) for row in g.adjacency_lists()]
    deg = [len(a) for a in adj]
    alive = [True] * n
    import heapq

    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    chosen = []
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        chosen.append(v)
        kill = [v] + [w for w in adj[v] if alive[w]]
        for w in kill:
            alive[w] = False
        for w in kill:
            for x in adj[w]:
                if alive[x]:
                    deg[x] -= 1
                    heapq.heappush(heap, (deg[x], x))
    return sorted(chosen)


# -- cycle proximity -------------------------------------------------------


def vertices_on_short_cycles(g: Graph, t, work_cap=50_000_000) -> set:
    """All vertices lying on some cycle of length <= t (exact enumeration).

    DFS over simple paths anchored at their minimum vertex; intended for
    small t on sparse graphs.
    """
    if t < 3:
        return set()
    adj = g.adjacency_lists()
    on_cycle = set()
    work = 0
    for a in range(g.n):
        # simple paths a -> ... with interior vertices > a, closing back to a
        stack = [(a, [a], {a})]
        while stack:
            u, path, used = stack.pop()
            work += 1
            if work > work_cap:
                raise BudgetExceededError("cycle enumeration work cap exceeded")
            for w in adj[u]:
                if w == a and len(path) >= 3:
                    on_cycle.update(path)
                elif w > a and w not in used and len(path) < t:
                    stack.append((w, path + [w], used | {w}))
    return on_cycle


def short_cycle_proximity(g: Graph, s, t, max_t=DEFAULT_CYCLE_LENGTH_CAP) -> int:
    """Z_{s,t}: number of vertices within distance s of a cycle of length <= t."""
    if t < 3:
        raise ValueError("t must be >= 3")
    if t > max_t:
        raise BudgetExceededError(f"cycle length {t} exceeds cap {max_t}")
    core = vertices_on_short_cycles(g, t)
    if not core:
        return 0
    adj = g.adjacency_lists()
    seen = set(core)
    frontier = list(core)
    for _ in range(s):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return len(seen)


# -- co-degree and neighborhood density ------------------------------------


def _distance_layers(g: Graph, v, r):
    """Exact-distance layers N_1(v), ..., N_r(v) as sets."""
    adj = g.adjacency_lists()
    seen = {v}
    frontier = [v]
    layers = []
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        layers.append(set(nxt))
        frontier = nxt
    return layers


def codegree_max(g: Graph, r):
    """(layer_codegree, power_codegree) co-degree sparsity statistics.

    layer_codegree: max over v, 1 <= i <= r and w != v of the number of
    G-edges from w into the exact-distance layer N_i(v) (w itself excluded
    from the target set).  power_codegree: same with the punctured ball
    N(v) = ball(v, r) \\ {v} as target and w ranging over N(v).
    """
    n = g.n
    adj = [set(row) for row in g.adjacency_lists()]
    layer_best = 0
    power_best = 0
    for v in range(n):
        layers = _distance_layers(g, v, r)
        nv = set()
        for li in layers:
            nv |= li
            if not li:
                continue
            for w in range(n):
                if w == v:
                    continue
                c = len(adj[w] & li)
                if c > layer_best:
                    layer_best = c
        for w in nv:
            c = len(adj[w] & nv)
            if c > power_best:
                power_best = c
    return layer_best, power_best


def power_neighborhood_edge_count(g: Graph, v, r) -> int:
    """Number of G^r-edges spanned by ball(v, r) \\ {v} (implicit)."""
    nv = set(ball(g, v, r))
    nv.discard(v)
    total = 0
    for u in nv:
        bu = set(ball(g, u, r))
        bu.discard(u)
        total += len(bu & nv)
    return total // 2
