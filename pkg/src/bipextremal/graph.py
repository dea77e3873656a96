"""Immutable simple graphs stored as per-vertex bitsets.

Vertex ``v`` of a :class:`Graph` has its neighbourhood stored as a Python
``int`` whose bit ``u`` is set iff ``uv`` is an edge, so neighbourhood
intersections are single ``&`` operations at any order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class Bipartition:
    """Two colour classes ``X`` and ``Y`` covering every vertex."""

    X: frozenset
    Y: frozenset

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.X), len(self.Y)

    def is_valid_for(self, g: "Graph") -> bool:
        if self.X & self.Y or (self.X | self.Y) != frozenset(range(g.n)):
            return False
        xm = to_mask(self.X)
        ym = to_mask(self.Y)
        return all(not (g.adj(v) & xm) for v in self.X) and all(
            not (g.adj(v) & ym) for v in self.Y
        )


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Instances are immutable; every "mutation" returns a new graph. Equality
    and hashing are by labelled adjacency, so isomorphic graphs with different
    labellings compare unequal (use canonical forms for isomorphism).
    """

    __slots__ = ("_n", "_rows", "_m", "_bipartition", "_hash")

    def __init__(self, n: int, rows: Sequence[int] | None = None, *, bipartition=None, _check=True):
        if n < 0:
            raise ValueError(f"order must be non-negative, got {n}")
        rows = tuple(rows) if rows is not None else (0,) * n
        if len(rows) != n:
            raise ValueError(f"expected {n} adjacency rows, got {len(rows)}")
        if _check:
            full = (1 << n) - 1
            for v, row in enumerate(rows):
                if row < 0 or row & ~full:
                    raise ValueError(f"row {v} references a vertex outside 0..{n - 1}")
                if row >> v & 1:
                    raise ValueError(f"self-loop at vertex {v}")
                for u in bits(row):
                    if not rows[u] >> v & 1:
                        raise ValueError(f"adjacency not symmetric at ({v}, {u})")
        self._n = n
        self._rows = rows
        self._m = sum(r.bit_count() for r in rows) // 2
        self._hash = None
        self._bipartition = None
        if bipartition is not None:
            if not bipartition.is_valid_for(self):
                raise ValueError("declared bipartition is not valid for this graph")
            self._bipartition = bipartition

    # construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for order {n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, _check=False)

    # basic queries ------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def bipartition(self) -> Bipartition | None:
        """The certified bipartition recorded at construction, if any."""
        return self._bipartition

    def adj(self, v: int) -> int:
        """Neighbourhood of ``v`` as a bitmask."""
        return self._rows[v]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self._rows[v]))

    def degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self._n) for v in bits(self._rows[u] >> (u + 1) << (u + 1))]

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self._n):
            raise ValueError(f"vertex {v!r} out of range for order {self._n}")

    # derived graphs -----------------------------------------------------

    def add_edge(self, u: int, v: int) -> "Graph":
        self.check_vertex(u)
        self.check_vertex(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        rows = list(self._rows)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return Graph(self._n, rows, _check=False)

    def remove_edge(self, u: int, v: int) -> "Graph":
        rows = list(self._rows)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self._n, rows, _check=False)

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced on ``vertices``, relabelled densely in increasing order."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        rows = []
        for v in keep:
            rows.append(to_mask(index[u] for u in bits(self._rows[v]) if u in index))
        return Graph(len(keep), rows, _check=False)

    def delete_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = set(vertices)
        return self.induced_subgraph(v for v in range(self._n) if v not in drop)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which old vertex ``v`` becomes ``perm[v]``."""
        rows = [0] * self._n
        for v in range(self._n):
            rows[perm[v]] = to_mask(perm[u] for u in bits(self._rows[v]))
        return Graph(self._n, rows, _check=False)

    # connectivity -------------------------------------------------------

    def component_masks(self) -> list[int]:
        seen = 0
        comps = []
        for s in range(self._n):
            if seen >> s & 1:
                continue
            comp = frontier = 1 << s
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self._rows[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return comps

    def components(self) -> list[frozenset]:
        return [frozenset(bits(c)) for c in self.component_masks()]

    def is_connected(self) -> bool:
        return self._n <= 1 or len(self.component_masks()) == 1

    # dunder -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, self._rows))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self._n}, edges={self.edges()})"

    def __reduce__(self):
        return (_rebuild, (self._n, self._rows, self._bipartition))


def _rebuild(n, rows, bipartition):
    g = Graph(n, rows, _check=False)
    g._bipartition = bipartition
    return g


# constructors -------------------------------------------------------------


def complete_bipartite(s: int, t: int) -> Graph:
    """K_{s,t} with class ``{0..s-1}`` of size s and ``{s..s+t-1}`` of size t."""
    if s < 1 or t < 1:
        raise ValueError(f"part sizes must be positive, got ({s}, {t})")
    left = (1 << s) - 1
    right = ((1 << t) - 1) << s
    rows = [right] * s + [left] * t
    bp = Bipartition(frozenset(range(s)), frozenset(range(s, s + t)))
    return Graph(s + t, rows, bipartition=bp, _check=False)


def empty_graph(n: int) -> Graph:
    return Graph(n, [0] * n, _check=False)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, [full & ~(1 << v) for v in range(n)], _check=False)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves}; vertex 0 is the centre."""
    return complete_bipartite(1, leaves)


def wheel_graph(rim: int) -> Graph:
    """A rim cycle on ``0..rim-1`` plus hub ``rim`` adjacent to all of it."""
    edges = [(i, (i + 1) % rim) for i in range(rim)] + [(i, rim) for i in range(rim)]
    return Graph.from_edges(rim + 1, edges)


# structural queries -------------------------------------------------------


def find_bipartition(g: Graph) -> Bipartition | None:
    """Two-colour ``g`` by BFS; ``None`` iff ``g`` contains an odd cycle.

    The lowest-indexed vertex of each component is placed in ``X``, so for a
    connected graph the answer is the unique 2-colouring with vertex 0 in X.
    """
    if g.bipartition is not None:
        return g.bipartition
    colour = [-1] * g.n
    for s in range(g.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in bits(g.adj(v)):
                if colour[u] < 0:
                    colour[u] = 1 - colour[v]
                    queue.append(u)
                elif colour[u] == colour[v]:
                    return None
    return Bipartition(
        frozenset(v for v in range(g.n) if colour[v] == 0),
        frozenset(v for v in range(g.n) if colour[v] == 1),
    )


def is_bipartite(g: Graph) -> bool:
    return find_bipartition(g) is not None


def with_bipartition(g: Graph) -> Graph:
    """Return ``g`` carrying a certified bipartition; raises if it has an odd cycle."""
    if g.bipartition is not None:
        return g
    bp = find_bipartition(g)
    if bp is None:
        raise ValueError("graph is not bipartite")
    return Graph(g.n, g.rows, bipartition=bp, _check=False)


def distance_layers(g: Graph, v: int) -> list[int]:
    """BFS layers from ``v`` as bitmasks; layer ``i`` holds the vertices at distance i."""
    g.check_vertex(v)
    layers = [1 << v]
    seen = 1 << v
    while True:
        nxt = 0
        for u in bits(layers[-1]):
            nxt |= g.adj(u)
        nxt &= ~seen
        if not nxt:
            return layers
        seen |= nxt
        layers.append(nxt)


def neighborhood_at_distance(g: Graph, v: int, i: int) -> frozenset:
    """N_i(v): the vertices at distance exactly ``i`` from ``v``."""
    if i < 0:
        raise ValueError(f"distance must be non-negative, got {i}")
    layers = distance_layers(g, v)
    return frozenset(bits(layers[i])) if i < len(layers) else frozenset()


def edge_counts(g: Graph, X: Iterable[int], Y: Iterable[int]) -> tuple[int, int]:
    """Return ``(e(X), e(X, Y))``.

    ``e(X, Y)`` counts every edge with one endpoint in X and the other in Y,
    each edge once; an edge with both ends in X ∩ Y is counted once. For
    disjoint X and Y this is the usual crossing-edge count.
    """
    xm = to_mask(X)
    ym = to_mask(Y)
    inside = 0
    across = 0
    for u, v in g.edges():
        ux, vx = xm >> u & 1, xm >> v & 1
        if ux and vx:
            inside += 1
        if (ux and ym >> v & 1) or (vx and ym >> u & 1):
            across += 1
    return inside, across


def mask_edge_count(g: Graph, xm: int) -> int:
    """e(X) for a vertex bitmask."""
    return sum((g.adj(v) & xm).bit_count() for v in bits(xm)) // 2


def mask_cross_count(g: Graph, xm: int, ym: int) -> int:
    """e(X, Y) for disjoint vertex bitmasks."""
    return sum((g.adj(v) & ym).bit_count() for v in bits(xm))


def peel_vertices(g: Graph, k: int, order: Sequence[int] | None = None) -> frozenset:
    """Vertices surviving repeated deletion of vertices of degree < k + 1.

    ``order`` fixes the priority in which deletable vertices are removed
    (the first deletable vertex in ``order`` goes first); the survivor set is
    the same for every order.
    """
    if k < 0:
        raise ValueError(f"threshold must be non-negative, got {k}")
    alive = (1 << g.n) - 1
    deg = g.degrees()
    if order is None:
        queue = deque(v for v in range(g.n) if deg[v] < k + 1)
        queued = to_mask(queue)
        while queue:
            v = queue.popleft()
            alive &= ~(1 << v)
            for u in bits(g.adj(v) & alive):
                deg[u] -= 1
                if deg[u] < k + 1 and not queued >> u & 1:
                    queued |= 1 << u
                    queue.append(u)
        return frozenset(bits(alive))
    rank = list(order)
    if sorted(rank) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")
    while True:
        victim = next((v for v in rank if alive >> v & 1 and deg[v] < k + 1), None)
        if victim is None:
            return frozenset(bits(alive))
        alive &= ~(1 << victim)
        for u in bits(g.adj(victim) & alive):
            deg[u] -= 1


def peel_to_min_degree(g: Graph, k: int, order: Sequence[int] | None = None) -> Graph:
    """Residual induced subgraph with minimum degree at least ``k + 1``.

    Deletes any vertex of current degree below ``k + 1`` until none is left;
    the result may be the empty graph.
    """
    return g.induced_subgraph(peel_vertices(g, k, order))


def gamma_of(g: Graph, z: int) -> int:
    """|A| + 2 e(A) + e(A, B) with A = N(z) and B the rest of V - z."""
    g.check_vertex(z)
    a = g.adj(z)
    b = ((1 << g.n) - 1) & ~a & ~(1 << z)
    return a.bit_count() + 2 * mask_edge_count(g, a) + mask_cross_count(g, a, b)


def blocks(g: Graph) -> list[int]:
    """Biconnected components (as vertex bitmasks) of the graph, bridges included.

    Isolated vertices are omitted.
    """
    n = g.n
    disc = [-1] * n
    low = [0] * n
    result = []
    timer = 0
    for root in range(n):
        if disc[root] >= 0 or not g.adj(root):
            continue
        disc[root] = low[root] = timer
        timer += 1
        edge_stack = []
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if disc[u] < 0:
                    edge_stack.append((v, u))
                    disc[u] = low[u] = timer
                    timer += 1
                    stack.append((u, v, iter(g.neighbors(u))))
                    advanced = True
                    break
                if u != parent and disc[u] < disc[v]:
                    edge_stack.append((v, u))
                    low[v] = min(low[v], disc[u])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if low[v] >= disc[parent]:
                    comp = 0
                    while True:
                        a, b = edge_stack.pop()
                        comp |= (1 << a) | (1 << b)
                        if (a, b) == (parent, v):
                            break
                    result.append(comp)
    return result
