"""Finite simple graphs with bitset adjacency and subgraph search.

Adjacency rows are Python ints used as bitsets (bit j of rows[i] set iff
{i, j} is an edge), which keeps candidate filtering in the embedding
search down to a few bitwise ops per node.  Graphs are immutable after
construction; searches allocate private state, so concurrent searches
over shared graphs are safe.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, NoEdges, NotBipartite, TooSmall


class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    __slots__ = ("n", "rows", "_m", "_plans")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.n = n
        self.rows = tuple(rows)
        self._m = sum(r.bit_count() for r in rows) // 2
        self._plans = {}

    @classmethod
    def _from_rows(cls, n: int, rows: Sequence[int]) -> "Graph":
        """Trusted constructor from prebuilt symmetric bitset rows."""
        g = cls.__new__(cls)
        g.n = n
        g.rows = tuple(rows)
        g._m = sum(r.bit_count() for r in rows) // 2
        g._plans = {}
        return g

    @classmethod
    def from_bool_matrix(cls, adj: np.ndarray) -> "Graph":
        """Graph from a symmetric boolean adjacency matrix (diagonal ignored)."""
        n = adj.shape[0]
        rows = []
        for i in range(n):
            row = np.array(adj[i], dtype=bool, copy=True)
            row[i] = False
            packed = np.packbits(row, bitorder="little").tobytes()
            rows.append(int.from_bytes(packed, "little"))
        return cls._from_rows(n, rows)

    @property
    def edge_count(self) -> int:
        return self._m

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        return iter_bits(self.rows[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in iter_bits(self.rows[u] >> (u + 1)):
                yield (u, v + u + 1)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self._m})"


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- catalog ------------------------------------------------------------


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise TooSmall(f"cycle needs n >= 3, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise TooSmall(f"path needs n >= 1, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise TooSmall(f"complete graph needs n >= 1, got {n}")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def hypercube_graph(k: int) -> Graph:
    """Vertices are bitstrings of length k; edges flip exactly one bit."""
    if k < 1:
        raise TooSmall(f"hypercube needs k >= 1, got {k}")
    edges = [(v, v ^ (1 << b)) for v in range(1 << k) for b in range(k) if v < v ^ (1 << b)]
    return Graph(1 << k, edges)


def shattering_graph(k: int, include_empty: bool = True) -> Graph:
    """Bipartite graph between indices 1..k and subsets of {1..k} under
    the element relation.

    Vertices 0..k-1 are the indices; vertex k + j is the subset with
    bitmask j (the empty set, j = 0, is isolated).  With
    include_empty=False the isolated empty-set vertex is dropped and
    subset bitmask j maps to vertex k + j - 1.
    """
    if k < 1:
        raise TooSmall(f"shattering graph needs k >= 1, got {k}")
    base = 0 if include_empty else 1
    n = k + (1 << k) - base
    edges = []
    for j in range(base, 1 << k):
        for i in iter_bits(j):
            edges.append((i, k + j - base))
    return Graph(n, edges)


_NAME_RE = re.compile(r"^([CPKQS])(\d+)$")


def graph_from_name(name: str) -> Graph:
    """Catalog lookup: C<n> cycle, P<n> path, K<n> complete, Q<k>
    hypercube, S<k> shattering."""
    m = _NAME_RE.match(name.strip())
    if not m:
        raise ValueError(f"unrecognized graph name {name!r}")
    kind, num = m.group(1), int(m.group(2))
    return {
        "C": cycle_graph,
        "P": path_graph,
        "K": complete_graph,
        "Q": hypercube_graph,
        "S": shattering_graph,
    }[kind](num)


# -- text format --------------------------------------------------------


def graph_to_text(g: Graph) -> str:
    """Serialize: first line `n m`, then one `u v` line per edge, u < v."""
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("graph text needs a header line `n m`")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * m:
        raise ValueError(f"expected {2*m} edge endpoints, got {len(body)}")
    seen = set()
    edges = []
    for i in range(m):
        u, v = int(body[2 * i]), int(body[2 * i + 1])
        if not u < v:
            raise ValueError(f"edge ({u}, {v}) must satisfy u < v")
        if (u, v) in seen:
            raise ValueError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph(n, edges)


# -- bipartition --------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    part_x: frozenset[int]
    part_y: frozenset[int]


def bipartition(g: Graph) -> Optional[Bipartition]:
    """Deterministic BFS 2-coloring; the lowest-index vertex of each
    component gets color 0 (part_x).  Returns None on an odd cycle."""
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in iter_bits(g.rows[u]):
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    part_x = frozenset(v for v in range(g.n) if color[v] == 0)
    return Bipartition(part_x, frozenset(range(g.n)) - part_x)


def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        queue = [start]
        while queue:
            u = queue.pop()
            for v in iter_bits(g.rows[u]):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(comp)
    return comps


def min_side_max_degree(g: Graph) -> int:
    """Smallest achievable max degree over one part of a bipartition.

    Each connected component's two color classes may be assigned to the
    parts independently, so the answer is the max over components of the
    smaller of the two class-wise maximum degrees.  Edgeless components
    contribute nothing.
    """
    if g.edge_count == 0:
        raise NoEdges("graph has no edges")
    bi = bipartition(g)
    if bi is None:
        raise NotBipartite("graph contains an odd cycle")
    r = 0
    for comp in _components(g):
        if all(g.degree(v) == 0 for v in comp):
            continue
        side0 = max(g.degree(v) for v in comp if v in bi.part_x)
        side1 = max(g.degree(v) for v in comp if v in bi.part_y)
        r = max(r, min(side0, side1))
    return r


# -- subgraph embedding search ------------------------------------------


@dataclass(frozen=True)
class EmbeddingWitness:
    """Injective map from pattern vertices to host vertices; mapping[u]
    is the host image of pattern vertex u."""

    mapping: tuple[int, ...]


class _Plan:
    """Precomputed search order for one pattern.

    Order is connectivity-first with descending degree: start at the
    highest-degree vertex; repeatedly take the vertex with the most
    already-placed neighbors, breaking ties by higher degree then lower
    index.  Vertices with no placed neighbor (new components, isolated
    vertices) are ranked the same way, which pushes isolated vertices to
    the end.  For each position we record the placed neighbors and, for
    induced search, the placed non-neighbors.
    """

    __slots__ = ("n", "order", "prior_nbrs", "prior_nonnbrs", "degrees", "induced")

    def __init__(self, pattern: Graph, induced: bool, anchor: tuple[int, int] | None = None):
        n = pattern.n
        degs = pattern.degrees()
        placed: list[int] = list(anchor) if anchor else []
        remaining = [v for v in range(n) if v not in placed]

        def rank(v: int) -> tuple[int, int, int]:
            placed_nbrs = sum(1 for w in placed if pattern.has_edge(v, w))
            return (placed_nbrs, degs[v], -v)

        while remaining:
            best = max(remaining, key=rank)
            placed.append(best)
            remaining.remove(best)

        self.n = n
        self.order = tuple(placed)
        self.degrees = tuple(degs[v] for v in placed)
        self.induced = induced
        prior_nbrs = []
        prior_nonnbrs = []
        for pos, v in enumerate(placed):
            nbrs = tuple(i for i in range(pos) if pattern.has_edge(v, placed[i]))
            prior_nbrs.append(nbrs)
            if induced:
                prior_nonnbrs.append(
                    tuple(i for i in range(pos) if not pattern.has_edge(v, placed[i]))
                )
            else:
                prior_nonnbrs.append(())
        self.prior_nbrs = tuple(prior_nbrs)
        self.prior_nonnbrs = tuple(prior_nonnbrs)


def _get_plan(pattern: Graph, induced: bool) -> _Plan:
    key = induced
    plan = pattern._plans.get(key)
    if plan is None:
        plan = _Plan(pattern, induced)
        pattern._plans[key] = plan
    return plan


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, budget: Optional[int]):
        self.remaining = budget

    def spend(self):
        if self.remaining is not None:
            self.remaining -= 1
            if self.remaining < 0:
                raise BudgetExceeded("embedding search budget exhausted")


def _search_rows(
    host_rows: Sequence[int],
    host_degs: Sequence[int],
    n_host: int,
    plan: _Plan,
    budget: _Budget,
    preassigned: Sequence[tuple[int, int]] = (),
) -> Optional[tuple[int, ...]]:
    """Backtracking engine over bitset rows.  Returns the mapping in plan
    order, or None.  `preassigned` fixes images for the first positions.
    """
    if plan.n > n_host:
        return None
    full = (1 << n_host) - 1
    images = [-1] * plan.n
    used = 0
    start = 0
    for pos, img in preassigned:
        assert pos == start
        if host_degs[img] < plan.degrees[pos] or used >> img & 1:
            return None
        for i in plan.prior_nbrs[pos]:
            if not host_rows[images[i]] >> img & 1:
                return None
        if plan.induced:
            for i in plan.prior_nonnbrs[pos]:
                if host_rows[images[i]] >> img & 1:
                    return None
        images[pos] = img
        used |= 1 << img
        start += 1

    def extend(pos: int) -> bool:
        nonlocal used
        if pos == plan.n:
            return True
        nbrs = plan.prior_nbrs[pos]
        if nbrs:
            cand = host_rows[images[nbrs[0]]]
            for i in nbrs[1:]:
                cand &= host_rows[images[i]]
        else:
            cand = full
        cand &= ~used
        if plan.induced:
            for i in plan.prior_nonnbrs[pos]:
                cand &= ~host_rows[images[i]]
        need = plan.degrees[pos]
        for v in iter_bits(cand):
            if host_degs[v] < need:
                continue
            budget.spend()
            images[pos] = v
            used |= 1 << v
            if extend(pos + 1):
                return True
            used ^= 1 << v
        images[pos] = -1
        return False

    if extend(start):
        return tuple(images)
    return None


def _witness_from_plan(plan: _Plan, images: tuple[int, ...]) -> EmbeddingWitness:
    mapping = [-1] * plan.n
    for pos, v in enumerate(plan.order):
        mapping[v] = images[pos]
    return EmbeddingWitness(tuple(mapping))


def contains_subgraph(
    host: Graph, pattern: Graph, budget: Optional[int] = None
) -> Optional[EmbeddingWitness]:
    """Find an injective map of pattern into host preserving edges.

    Not-necessarily-induced containment: extra host edges are permitted.
    Returns a witness or None (a proof of absence).  A node-expansion
    budget may be set; exhausting it raises BudgetExceeded rather than
    returning None.
    """
    plan = _get_plan(pattern, induced=False)
    images = _search_rows(host.rows, host.degrees(), host.n, plan, _Budget(budget))
    return None if images is None else _witness_from_plan(plan, images)


def contains_induced_subgraph(
    host: Graph, pattern: Graph, budget: Optional[int] = None
) -> Optional[EmbeddingWitness]:
    """As contains_subgraph, additionally rejecting maps where a pattern
    non-edge lands on a host edge."""
    plan = _get_plan(pattern, induced=True)
    images = _search_rows(host.rows, host.degrees(), host.n, plan, _Budget(budget))
    return None if images is None else _witness_from_plan(plan, images)


def verify_embedding(
    host: Graph, pattern: Graph, mapping: Sequence[int], induced: bool = False
) -> bool:
    """Independent witness check: injectivity plus edge preservation
    (plus non-edge preservation when induced)."""
    if len(mapping) != pattern.n or len(set(mapping)) != pattern.n:
        return False
    if not all(0 <= v < host.n for v in mapping):
        return False
    for u in range(pattern.n):
        for v in range(u + 1, pattern.n):
            if pattern.has_edge(u, v):
                if not host.has_edge(mapping[u], mapping[v]):
                    return False
            elif induced and host.has_edge(mapping[u], mapping[v]):
                return False
    return True
