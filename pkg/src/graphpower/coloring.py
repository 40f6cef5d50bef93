"""Proper colorings of graph powers.

Greedy (implicit, BFS conflict checks), exact chromatic number via DSATUR
branch-and-bound on an explicit graph, and the constructive two-phase
coloring that achieves Delta(G^{r-1}) + 1 colors when the high-degree
subgraph is a forest.

Tie-breaking is smallest-index / smallest-color everywhere, so runs are
reproducible and witnesses stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, ForestViolationError
from .graph import Graph, induced_subgraph, is_forest, neighborhood_union
from .metrics import (DEFAULT_NODE_BUDGET, high_degree_set, max_clique_exact,
                      power_max_degree)


@dataclass
class Coloring:
    """Vertex -> color assignment plus the power radius it was checked against."""

    colors: list
    palette_size: int
    radius: int

    def __post_init__(self):
        assert self.palette_size == (max(self.colors) + 1 if self.colors else 0)


def _mex(used):
    c = 0
    while c in used:
        c += 1
    return c


def _colored_ball_colors(adj, colors, v, r):
    """Colors already assigned within G-distance <= r of v."""
    seen = {v}
    frontier = [v]
    found = set()
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if colors[w] >= 0:
                        found.add(colors[w])
        if not nxt:
            break
        frontier = nxt
    return found


def greedy_power_coloring(g: Graph, r, order=None) -> Coloring:
    """Greedy coloring of G^r in the given vertex order (default 0..n-1).

    Each vertex gets the smallest color absent from its already-colored
    distance-<= r neighborhood; the power is never materialized.
    """
    n = g.n
    if order is None:
        order = range(n)
    else:
        if sorted(order) != list(range(n)):
            raise ValueError("order must be a permutation of all vertices")
    adj = g.adjacency_lists()
    colors = [-1] * n
    for v in order:
        colors[v] = _mex(_colored_ball_colors(adj, colors, v, r))
    return Coloring(colors, max(colors) + 1 if n else 0, r)


def greedy_coloring_explicit(gp: Graph, order=None, radius=1) -> Coloring:
    """Greedy coloring of an explicit graph (e.g. a materialized power)."""
    n = gp.n
    if order is None:
        order = range(n)
    adj = gp.adjacency_lists()
    colors = [-1] * n
    for v in order:
        used = {colors[w] for w in adj[v] if colors[w] >= 0}
        colors[v] = _mex(used)
    return Coloring(colors, max(colors) + 1 if n else 0, radius)


def dsatur_greedy(gp: Graph) -> Coloring:
    """DSATUR heuristic coloring of an explicit graph (upper bound)."""
    n = gp.n
    adj = gp.adjacency_lists()
    colors = [-1] * n
    neighbor_colors = [set() for _ in range(n)]
    degrees = [len(a) for a in adj]
    uncolored = set(range(n))
    while uncolored:
        v = max(uncolored,
                key=lambda u: (len(neighbor_colors[u]), degrees[u], -u))
        c = _mex(neighbor_colors[v])
        colors[v] = c
        uncolored.discard(v)
        for w in adj[v]:
            neighbor_colors[w].add(c)
    return Coloring(colors, max(colors) + 1 if n else 0, 1)


def dsatur_chromatic_exact(gp: Graph, node_budget=DEFAULT_NODE_BUDGET):
    """Exact chromatic number of an explicit graph with a witness coloring.

    DSATUR branch-and-bound seeded by the exact clique lower bound and the
    DSATUR-greedy upper bound.  Intended for small instances (n <= ~80).
    Raises BudgetExceededError with the best bounds attached.
    """
    n = gp.n
    if n == 0:
        return 0, Coloring([], 0, 1)
    ub_col = dsatur_greedy(gp)
    best = ub_col.palette_size
    best_colors = list(ub_col.colors)
    try:
        lb = max_clique_exact(gp, node_budget=min(node_budget, 1_000_000))
    except BudgetExceededError as exc:
        lb = exc.lower or 1
    if lb >= best:
        return best, Coloring(best_colors, best, 1)

    adj = gp.adjacency_lists()
    degrees = [len(a) for a in adj]
    colors = [-1] * n
    neighbor_masks = [0] * n
    nodes = 0

    class _Done(Exception):
        pass

    def bb(num_colored, used):
        nonlocal best, best_colors, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceededError("chromatic node budget exceeded",
                                      lower=lb, upper=best)
        if used >= best:
            return
        if num_colored == n:
            best = used
            best_colors = colors.copy()
            if best <= lb:
                raise _Done
            return
        v = -1
        v_key = None
        for u in range(n):
            if colors[u] < 0:
                key = (neighbor_masks[u].bit_count(), degrees[u], -u)
                if v_key is None or key > v_key:
                    v_key = key
                    v = u
        limit = min(used + 1, best - 1)
        mask = neighbor_masks[v]
        for c in range(limit):
            if (mask >> c) & 1:
                continue
            colors[v] = c
            touched = []
            bit = 1 << c
            for w in adj[v]:
                if colors[w] < 0 and not (neighbor_masks[w] & bit):
                    neighbor_masks[w] |= bit
                    touched.append(w)
            bb(num_colored + 1, max(used, c + 1))
            colors[v] = -1
            for w in touched:
                neighbor_masks[w] &= ~bit

    try:
        bb(0, 0)
    except _Done:
        pass
    return best, Coloring(best_colors, best, 1)


def two_phase_power_coloring(g: Graph, r) -> Coloring:
    """Constructive coloring of G^r with at most Delta(G^{r-1}) + 1 colors.

    Phase 1 colors the high-degree set S over the forest induced by
    S and its radius-r neighborhood, trees rooted at their smallest vertex
    and traversed in BFS order.  Phase 2 colors the remaining vertices
    greedily in increasing index order.  Raises ForestViolationError (with
    a witness cycle in original indices) when the forest condition of the
    construction fails; callers may fall back to plain greedy.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    n = g.n
    adj = g.adjacency_lists()
    delta_prev = power_max_degree(g, r - 1).delta
    s_set = high_degree_set(g, r, delta_prev)
    colors = [-1] * n

    if s_set:
        closure = neighborhood_union(g, s_set, r, include_sources=True)
        h, index_map = induced_subgraph(g, closure)
        forest, cycle = is_forest(h)
        if not forest:
            inverse = {i: v for v, i in index_map.items()}
            raise ForestViolationError([inverse[x] for x in cycle])
        # phase 1: BFS over each tree, smallest original index as root,
        # coloring the S-vertices in visit order
        h_adj = h.adjacency_lists()
        inverse = [0] * h.n
        for v, i in index_map.items():
            inverse[i] = v
        in_s = set(s_set)
        visited = [False] * h.n
        for root in range(h.n):  # closure is sorted, so index order = vertex order
            if visited[root]:
                continue
            visited[root] = True
            frontier = [root]
            while frontier:
                nxt = []
                for x in frontier:
                    ox = inverse[x]
                    if ox in in_s:
                        used = _colored_ball_colors(adj, colors, ox, r)
                        colors[ox] = _mex(used)
                    for y in h_adj[x]:
                        if not visited[y]:
                            visited[y] = True
                            nxt.append(y)
                frontier = nxt

    # phase 2: all remaining vertices, increasing index order
    for v in range(n):
        if colors[v] < 0:
            colors[v] = _mex(_colored_ball_colors(adj, colors, v, r))

    palette = max(colors) + 1 if n else 0
    assert palette <= delta_prev + 1, "color budget exceeded despite forest condition"
    return Coloring(colors, palette, r)


def verify_proper_power_coloring(g: Graph, r, coloring: Coloring):
    """(True, None) iff no two vertices at G-distance <= r share a color;
    otherwise (False, first violating pair).  Checked by truncated BFS."""
    n = g.n
    colors = coloring.colors
    if len(colors) != n:
        raise ValueError("coloring size mismatch")
    adj = g.adjacency_lists()
    for v in range(n):
        seen = {v}
        frontier = [v]
        cv = colors[v]
        for _ in range(r):
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
                        if colors[w] == cv and w > v:
                            return False, (v, w)
            if not nxt:
                break
            frontier = nxt
    return True, None


# -- serialization ---------------------------------------------------------


def write_coloring(coloring: Coloring, path):
    """Text format: ``s <palette_size> <r>`` then ``c <vertex> <color>`` lines."""
    with open(path, "w") as fh:
        fh.write(f"s {coloring.palette_size} {coloring.radius}\n")
        for v, c in enumerate(coloring.colors):
            fh.write(f"c {v} {c}\n")


def read_coloring(path) -> Coloring:
    palette = radius = None
    assignments = {}
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "s":
                palette, radius = int(parts[1]), int(parts[2])
            elif parts[0] == "c":
                assignments[int(parts[1])] = int(parts[2])
    if palette is None:
        raise ValueError("missing solution header line")
    colors = [assignments[v] for v in range(len(assignments))]
    return Coloring(colors, palette, radius)
