"""Immutable sparse graphs, G(n,p) sampling, BFS primitives, and file I/O.

Graphs are stored in compressed-row form (``indptr``/``indices`` a la CSR)
with strictly sorted adjacency rows, no self-loops and no parallel edges.
Vertices are 0-indexed everywhere except at the DIMACS boundary, which is
1-indexed.  All natural logs throughout the package.
"""

from __future__ import annotations

import numpy as np

from .errors import MemoryBudgetError
from .rng import RandomSource

DEFAULT_EDGE_CAP = 10 ** 8


class Graph:
    """Simple undirected graph in compressed adjacency form.

    Immutable after construction; safe to share across workers.
    """

    __slots__ = ("n", "indptr", "indices", "_adj")

    def __init__(self, n, indptr, indices, validate=True):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self._adj = None
        if validate:
            self._validate()

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, n, edges):
        """Build a graph from an iterable of (u, v) pairs.

        Orientation and duplicates are normalized away; self-loops are
        rejected.
        """
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64)
        if arr.size == 0:
            return cls(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64),
                       validate=False)
        arr = arr.reshape(-1, 2)
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("edge endpoint out of range")
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        if np.any(u == v):
            raise ValueError("self-loop rejected")
        keys = np.unique(u * np.int64(n) + v)
        u = keys // n
        v = keys % n
        return cls._from_half_edges(n, u, v)

    @classmethod
    def _from_half_edges(cls, n, u, v):
        """CSR from deduplicated i<j half edges."""
        heads = np.concatenate([u, v])
        tails = np.concatenate([v, u])
        order = np.lexsort((tails, heads))
        heads = heads[order]
        tails = tails[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(heads, minlength=n), out=indptr[1:])
        return cls(n, indptr, tails, validate=False)

    def _validate(self):
        if self.indptr.shape != (self.n + 1,) or self.indptr[0] != 0:
            raise ValueError("malformed indptr")
        if self.indptr[-1] != self.indices.size:
            raise ValueError("indptr/indices length mismatch")
        if self.indices.size:
            if self.indices.min() < 0 or self.indices.max() >= self.n:
                raise ValueError("neighbor index out of range")
            # strictly sorted rows, no self-loops
            d = np.diff(self.indices)
            row_ends = self.indptr[1:-1] - 1
            interior = np.ones(self.indices.size - 1, dtype=bool)
            interior[row_ends[row_ends < d.size]] = False
            if np.any(d[interior] <= 0):
                raise ValueError("adjacency rows must be strictly sorted")
            rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
            if np.any(rows == self.indices):
                raise ValueError("self-loop rejected")
            # symmetry: the multiset of (u,v) equals the multiset of (v,u)
            k1 = np.sort(rows * np.int64(self.n) + self.indices)
            k2 = np.sort(self.indices * np.int64(self.n) + rows)
            if not np.array_equal(k1, k2):
                raise ValueError("adjacency not symmetric")

    # -- queries -----------------------------------------------------------

    @property
    def m(self) -> int:
        return self.indices.size // 2

    def degree(self, v) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency_lists(self):
        """Adjacency as plain lists of ints (cached; fast for BFS loops)."""
        if self._adj is None:
            idx = self.indices.tolist()
            ptr = self.indptr.tolist()
            self._adj = [idx[ptr[i]:ptr[i + 1]] for i in range(self.n)]
        return self._adj

    def has_edge(self, u, v) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < row.size and row[i] == v

    def edge_array(self) -> np.ndarray:
        """All edges as an (m, 2) array with u < v, lexicographically sorted."""
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# -- sampling --------------------------------------------------------------


def gnp_sample(n, p, src: RandomSource, mode="auto") -> Graph:
    """Sample G(n, p) from a seeded stream.

    Pair decisions correspond to lexicographic order over i < j.  Two
    deterministic modes exist and give different (but individually
    reproducible) samples for the same seed:

    - ``bernoulli``: one uniform draw per pair, row by row;
    - ``skip``: geometric gaps between successive edges over the linearized
      pair index (the standard sparse sampler).

    ``auto`` picks ``bernoulli`` when n(n-1)/2 <= 2**21, else ``skip``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = n * (n - 1) // 2
    if n <= 1 or p == 0.0:
        return Graph(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64),
                     validate=False)
    if p == 1.0:
        u, v = np.triu_indices(n, k=1)
        return Graph._from_half_edges(n, u.astype(np.int64), v.astype(np.int64))
    if mode == "auto":
        mode = "bernoulli" if total <= 2 ** 21 else "skip"
    rng = src.generator
    if mode == "bernoulli":
        us, vs = [], []
        for i in range(n - 1):
            row = rng.random(n - 1 - i)
            hits = np.nonzero(row < p)[0]
            if hits.size:
                us.append(np.full(hits.size, i, dtype=np.int64))
                vs.append(hits.astype(np.int64) + i + 1)
        if not us:
            return Graph(n, np.zeros(n + 1, dtype=np.int64),
                         np.empty(0, dtype=np.int64), validate=False)
        return Graph._from_half_edges(n, np.concatenate(us), np.concatenate(vs))
    if mode != "skip":
        raise ValueError(f"unknown sampling mode {mode!r}")
    # geometric-skip over linear pair indices 0..total-1
    log1mp = np.log1p(-p)
    positions = []
    pos = -1
    batch = max(1024, int(total * p * 1.1) + 64)
    while pos < total:
        u = rng.random(batch)
        gaps = np.floor(np.log1p(-u) / log1mp).astype(np.int64) + 1
        steps = np.cumsum(gaps) + pos
        positions.append(steps)
        pos = int(steps[-1])
        batch = 1024
    lin = np.concatenate(positions)
    lin = lin[lin < total]
    # row offsets: row i spans lengths n-1-i
    offsets = np.zeros(n, dtype=np.int64)
    np.cumsum(np.arange(n - 1, 0, -1, dtype=np.int64), out=offsets[1:])
    i = np.searchsorted(offsets, lin, side="right") - 1
    j = i + 1 + (lin - offsets[i])
    return Graph._from_half_edges(n, i, j)


# -- powers and BFS --------------------------------------------------------


def graph_power(g: Graph, r, edge_cap=DEFAULT_EDGE_CAP) -> Graph:
    """Explicit r-th power: u ~ v iff 1 <= dist(u, v) <= r.

    Backed by sparse boolean matrix products; raises
    :class:`MemoryBudgetError` when the result would exceed ``edge_cap``
    edges (callers then fall back to implicit metrics).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if r == 1:
        return g
    from scipy import sparse

    n = g.n
    data = np.ones(g.indices.size, dtype=np.int64)
    a = sparse.csr_matrix((data, g.indices, g.indptr), shape=(n, n))
    b = (a + sparse.identity(n, dtype=np.int64, format="csr")).tocsr()
    b.data.fill(1)
    reach = b
    for _ in range(r - 1):
        reach = reach @ b
        reach.data.fill(1)
        if (reach.nnz - n) // 2 > edge_cap:
            raise MemoryBudgetError(
                f"explicit power exceeds edge cap {edge_cap}")
    reach = sparse.csr_matrix(reach)
    reach.setdiag(0)
    reach.eliminate_zeros()
    reach.sort_indices()
    return Graph(n, reach.indptr.astype(np.int64), reach.indices.astype(np.int64),
                 validate=False)


def bfs_layers(g: Graph, v, r):
    """BFS layer sizes (l_1, ..., l_r) from v; never materializes a power."""
    if r < 1:
        raise ValueError("r must be >= 1")
    adj = g.adjacency_lists()
    seen = {v}
    frontier = [v]
    sizes = []
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        sizes.append(len(nxt))
        frontier = nxt
    return tuple(sizes)


def ball(g: Graph, v, r):
    """Sorted list of all vertices at distance <= r from v (including v)."""
    adj = g.adjacency_lists()
    seen = {v}
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return sorted(seen)


def neighborhood_union(g: Graph, s, r, include_sources=True):
    """Union of radius-r balls around the vertices of s.

    With ``include_sources`` (the default) this is the closed union
    S ∪ N_r(S); with it off, the sources themselves are dropped.
    """
    adj = g.adjacency_lists()
    seen = set(s)
    frontier = list(s)
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    if not include_sources:
        seen -= set(s)
    return sorted(seen)


def induced_subgraph(g: Graph, s):
    """Graph induced on vertex set s, plus the old->new index map.

    New indices follow the sorted order of s.
    """
    s = sorted(set(s))
    index_map = {v: i for i, v in enumerate(s)}
    ns = len(s)
    mask = np.full(g.n, -1, dtype=np.int64)
    for v, i in index_map.items():
        mask[v] = i
    edges = []
    for v in s:
        nv = index_map[v]
        for w in g.neighbors(v):
            mw = mask[w]
            if mw > nv:
                edges.append((nv, mw))
    return Graph.from_edges(ns, edges), index_map


def connected_components(g: Graph):
    """Component label per vertex and the component count."""
    adj = g.adjacency_lists()
    label = [-1] * g.n
    count = 0
    for start in range(g.n):
        if label[start] != -1:
            continue
        stack = [start]
        label[start] = count
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if label[w] == -1:
                    label[w] = count
                    stack.append(w)
        count += 1
    return label, count


def is_forest(g: Graph):
    """(True, None) if acyclic, else (False, witness cycle vertex list)."""
    adj = g.adjacency_lists()
    state = [0] * g.n  # 0 unseen, 1 seen
    parent = [-1] * g.n
    for start in range(g.n):
        if state[start]:
            continue
        state[start] = 1
        stack = [(start, -1)]
        while stack:
            u, pu = stack.pop()
            skipped_parent = False
            for w in adj[u]:
                if w == pu and not skipped_parent:
                    skipped_parent = True
                    continue
                if state[w]:
                    # back edge: walk both endpoints to their common root
                    path_u = [u]
                    x = u
                    while parent[x] != -1:
                        x = parent[x]
                        path_u.append(x)
                    anc = set(path_u)
                    path_w = [w]
                    x = w
                    while x not in anc:
                        x = parent[x]
                        path_w.append(x)
                    meet = x
                    cycle = path_w + path_u[:path_u.index(meet)][::-1]
                    return False, cycle
                state[w] = 1
                parent[w] = u
                stack.append((w, u))
    return True, None


def eccentricity_at_most(g: Graph, v, r) -> bool:
    return len(ball(g, v, r)) == g.n


# -- file formats ----------------------------------------------------------


def write_edgelist(g: Graph, path):
    """Text edge list: header ``n m`` then ``u v`` lines, 0-indexed, u < v."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edge_array():
            fh.write(f"{u} {v}\n")


def read_edgelist(path) -> Graph:
    with open(path) as fh:
        header = fh.readline().split()
        n, m = int(header[0]), int(header[1])
        edges = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u, v = line.split()
            edges.append((int(u), int(v)))
    if len(edges) != m:
        raise ValueError(f"expected {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def write_dimacs(g: Graph, path):
    """DIMACS coloring format (.col), 1-indexed."""
    with open(path, "w") as fh:
        fh.write(f"p edge {g.n} {g.m}\n")
        for u, v in g.edge_array():
            fh.write(f"e {u + 1} {v + 1}\n")


def read_dimacs(path) -> Graph:
    n = None
    edges = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0] == "c":
                continue
            if parts[0] == "p":
                n = int(parts[2])
            elif parts[0] == "e":
                edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    if n is None:
        raise ValueError("missing DIMACS problem line")
    return Graph.from_edges(n, edges)
