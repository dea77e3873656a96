"""Exact detectors for fixed-length cycles, anchored paths, trees and minors.

All searches are exhaustive backtracking over bitmask neighbourhoods, exact
at desk scale. Every positive answer comes with a :class:`Witness` that can
be re-checked against the host graph with :meth:`Witness.validate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable

from .errors import BudgetExceeded
from .graph import (
    Graph, blocks, bits, complete_bipartite, complete_graph, find_bipartition,
    peel_vertices, to_mask,
)

DEFAULT_MINOR_BUDGET = 10**7
MAX_MINOR_PATTERN = 6

K4 = complete_graph(4)
K23 = complete_bipartite(2, 3)


@dataclass(frozen=True)
class TreePattern:
    """A tree used as a containment pattern."""

    tree: Graph

    def __post_init__(self):
        g = self.tree
        if g.n < 1 or g.m != g.n - 1 or not g.is_connected():
            raise ValueError("pattern is not a tree")

    @property
    def order(self) -> int:
        return self.tree.n


@dataclass(frozen=True)
class Witness:
    """A structure found in a host graph.

    ``cycle`` and ``path`` list vertices in traversal order;
    ``tree-embedding`` lists the host image of pattern vertex 0, 1, ...;
    ``minor-model`` gives one branch set per pattern vertex.
    """

    kind: str
    vertices: tuple = ()
    branch_sets: tuple = ()

    def validate(self, g: Graph, pattern: Graph | TreePattern | None = None) -> bool:
        if isinstance(pattern, TreePattern):
            pattern = pattern.tree
        vs = self.vertices
        if self.kind in ("cycle", "path", "tree-embedding"):
            if len(set(vs)) != len(vs) or any(not 0 <= v < g.n for v in vs):
                return False
        if self.kind == "cycle":
            return len(vs) >= 3 and all(g.has_edge(vs[i - 1], vs[i]) for i in range(len(vs)))
        if self.kind == "path":
            return len(vs) >= 1 and all(g.has_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1))
        if self.kind == "tree-embedding":
            if pattern is None or len(vs) != pattern.n:
                return False
            return all(g.has_edge(vs[u], vs[v]) for u, v in pattern.edges())
        if self.kind == "minor-model":
            if pattern is None or len(self.branch_sets) != pattern.n:
                return False
            masks = [to_mask(s) for s in self.branch_sets]
            used = 0
            for s, mask in zip(self.branch_sets, masks):
                if not s or used & mask or any(not 0 <= v < g.n for v in s):
                    return False
                used |= mask
                if not _is_connected_mask(g, mask):
                    return False
            return all(_touches(g, masks[u], masks[v]) for u, v in pattern.edges())
        raise ValueError(f"unknown witness kind {self.kind!r}")


def _is_connected_mask(g: Graph, mask: int) -> bool:
    if not mask:
        return False
    seen = frontier = mask & -mask
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj(v)
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def _touches(g: Graph, a: int, b: int) -> bool:
    return any(g.adj(v) & b for v in bits(a))


def _neighbourhood(g: Graph, mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= g.adj(v)
    return out & ~mask


def _component_of(g: Graph, v: int, allowed: int) -> int:
    comp = frontier = 1 << v
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= g.adj(u)
        frontier = nxt & allowed & ~comp
        comp |= frontier
    return comp


def _distances(g: Graph, src: int, allowed: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = 1 << src
    seen = frontier
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for u in bits(frontier):
            nxt |= g.adj(u)
        frontier = nxt & allowed & ~seen
        seen |= frontier
        for u in bits(frontier):
            dist[u] = d
    return dist


# cycles and paths ---------------------------------------------------------


def contains_cycle(g: Graph, length: int) -> Witness | None:
    """A cycle on exactly ``length`` vertices, or ``None``.

    Roots each candidate cycle at its smallest vertex and extends simple
    paths through larger vertices, pruning extensions that can no longer
    return to the root in the steps left.
    """
    if length < 3:
        raise ValueError(f"cycle length must be at least 3, got {length}")
    if length > g.n or g.m < length:
        return None
    if length % 2 and find_bipartition(g) is not None:
        return None
    full = (1 << g.n) - 1
    for root in range(g.n - length + 1):
        above = full & ~((1 << root) - 1)
        comp = _component_of(g, root, above)
        if comp.bit_count() < length:
            continue
        dist = _distances(g, root, comp)
        path = [root]
        found = _cycle_dfs(g, root, length, comp, dist, path, 1 << root)
        if found:
            return Witness("cycle", tuple(path))
    return None


def _cycle_dfs(g, root, length, comp, dist, path, used):
    v = path[-1]
    depth = len(path)
    if depth == length:
        return bool(g.adj(v) >> root & 1)
    left = length - depth  # vertices still to add, including this step
    for u in bits(g.adj(v) & comp & ~used):
        if dist[u] > left:
            continue
        path.append(u)
        if _cycle_dfs(g, root, length, comp, dist, path, used | 1 << u):
            return True
        path.pop()
    return False


def contains_anchored_path(g: Graph, X: Iterable[int], r: int) -> Witness | None:
    """A path on ``2r + 1`` vertices whose two endpoints both lie in ``X``."""
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    xm = to_mask(X)
    length = 2 * r + 1
    if length > g.n:
        return None
    for s in bits(xm):
        path = [s]
        if _path_dfs(g, length, xm, s, path, 1 << s):
            return Witness("path", tuple(path))
    return None


def _path_dfs(g, length, xm, start, path, used):
    v = path[-1]
    if len(path) == length:
        return v > start and bool(xm >> v & 1)
    for u in bits(g.adj(v) & ~used):
        path.append(u)
        if _path_dfs(g, length, xm, start, path, used | 1 << u):
            return True
        path.pop()
    return False


# trees ----------------------------------------------------------------------


def _tree_order(tree: Graph, anchor: int) -> list[tuple[int, int]]:
    """Placement order: internal vertices breadth-first from ``anchor``, then leaves."""
    deg = tree.degrees()
    parent = {anchor: -1}
    queue = [anchor]
    for v in queue:
        for u in tree.neighbors(v):
            if u not in parent:
                parent[u] = v
                queue.append(u)
    internal = [v for v in queue if v == anchor or deg[v] > 1]
    leaves = sorted((v for v in queue if v != anchor and deg[v] == 1), key=lambda v: (parent[v], v))
    return [(v, parent[v]) for v in internal + leaves]


def contains_tree(g: Graph, T: TreePattern) -> Witness | None:
    """An injective embedding of the tree ``T`` into ``g`` as a subgraph.

    The pattern is anchored at a maximum-degree vertex tried on host vertices
    in decreasing degree order. Leaves hanging from the same pattern vertex
    are interchangeable, so their images are forced to increase.
    """
    tree = T.tree
    t = tree.n
    if t > g.n:
        return None
    if t == 1:
        return Witness("tree-embedding", (0,))
    tdeg = tree.degrees()
    gdeg = g.degrees()
    if max(tdeg) > max(gdeg) or g.m < t - 1:
        return None
    anchor = max(range(t), key=lambda v: (tdeg[v], -v))
    order = _tree_order(tree, anchor)
    twin = {}
    last_leaf = {}
    for v, par in order[1:]:
        if tdeg[v] == 1:
            if par in last_leaf:
                twin[v] = last_leaf[par]
            last_leaf[par] = v
    image = [-1] * t

    def extend(i, used):
        if i == t:
            return True
        v, par = order[i]
        cand = g.adj(image[par]) & ~used
        if v in twin:
            cand &= ~((1 << (image[twin[v]] + 1)) - 1)
        need = tdeg[v]
        for u in bits(cand):
            if gdeg[u] < need:
                continue
            image[v] = u
            if extend(i + 1, used | 1 << u):
                return True
        image[v] = -1
        return False

    for h in sorted(range(g.n), key=lambda v: (-gdeg[v], v)):
        if gdeg[h] < tdeg[anchor]:
            break
        image[anchor] = h
        if extend(1, 1 << h):
            return Witness("tree-embedding", tuple(image))
    return None


def greedy_min_degree_embed(g: Graph, T: TreePattern) -> Witness | None:
    """Grow ``T`` vertex by vertex, each new vertex on any unused host neighbour.

    Succeeds whenever min degree of ``g`` is at least ``|T| - 1``: a parent
    image then has at least t - 1 neighbours and at most t - 2 are taken.
    Below that threshold it is only a heuristic and may miss embeddings.
    """
    tree = T.tree
    t = tree.n
    if g.n == 0 or t > g.n:
        return None
    order = _tree_order(tree, 0)
    root = max(range(g.n), key=lambda v: (g.degree(v), -v))
    image = [-1] * t
    image[0] = root
    used = 1 << root
    for v, par in order[1:]:
        cand = g.adj(image[par]) & ~used
        if not cand:
            return None
        u = (cand & -cand).bit_length() - 1
        image[v] = u
        used |= 1 << u
    return Witness("tree-embedding", tuple(image))


def contains_all_trees(g: Graph, t: int) -> tuple[bool, TreePattern | None]:
    """Whether every free tree of order ``t`` embeds; else the first one missing."""
    if t < 1:
        raise ValueError(f"tree order must be at least 1, got {t}")
    from .enumeration import enumerate_free_trees

    for T in enumerate_free_trees(t):
        if contains_tree(g, T) is None:
            return False, T
    return True, None


# minors ---------------------------------------------------------------------


def _connected_sets(g: Graph, roots: int, allowed: int, max_size: int):
    """Yield connected vertex sets inside ``allowed`` that meet ``roots``.

    Each set is produced once, from its lowest member of ``roots``.
    """
    done = 0
    for r in bits(roots & allowed):
        excl = done | ~allowed
        yield from _grow(g, 1 << r, _neighbourhood(g, 1 << r) & allowed & ~excl, excl, max_size)
        done |= 1 << r


def _grow(g, s, cand, excl, max_size):
    yield s
    if s.bit_count() >= max_size:
        return
    while cand:
        v = cand & -cand
        cand ^= v
        u = v.bit_length() - 1
        child = (cand | g.adj(u)) & ~s & ~v & ~excl
        yield from _grow(g, s | v, child, excl, max_size)
        excl |= v


def _pattern_order(h: Graph) -> list[int]:
    """Max-degree start, then repeatedly the vertex with most placed neighbours."""
    deg = h.degrees()
    order = [max(range(h.n), key=lambda v: (deg[v], -v))]
    placed = 1 << order[0]
    while len(order) < h.n:
        v = max((v for v in range(h.n) if not placed >> v & 1),
                key=lambda v: ((h.adj(v) & placed).bit_count(), deg[v], -v))
        order.append(v)
        placed |= 1 << v
    return order


class _MinorSearch:
    def __init__(self, g: Graph, h: Graph, budget: int):
        self.g = g
        self.h = h
        self.budget = budget
        self.nodes = 0
        self.order = _pattern_order(h)
        pos = {v: i for i, v in enumerate(self.order)}
        self.before = [[pos[u] for u in h.neighbors(v) if pos[u] < i] for i, v in enumerate(self.order)]
        self.deg = [h.degree(v) for v in self.order]
        # positions whose branch sets still matter once position i is being placed
        self.live = [
            tuple(j for j in range(i) if any(j in self.before[l] for l in range(i, h.n)))
            for i in range(h.n + 1)
        ]
        self.failed = set()
        self.sets = [0] * h.n

    def run(self):
        if self._place(0, 0):
            model = [frozenset()] * self.h.n
            for i, v in enumerate(self.order):
                model[v] = frozenset(bits(self.sets[i]))
            return tuple(model)
        return None

    def _future_feasible(self, i, used):
        free = ((1 << self.g.n) - 1) & ~used
        if (self.h.n - i) > free.bit_count():
            return False
        comps = []
        rest = free
        while rest:
            c = _component_of(self.g, (rest & -rest).bit_length() - 1, free)
            comps.append((c, _neighbourhood(self.g, c)))
            rest &= ~c
        for j in range(i, self.h.n):
            req = [self.sets[l] for l in self.before[j] if l < i]
            if not any(all(nb & s for s in req) for _, nb in comps):
                return False
        return True

    def _place(self, i, used):
        p = self.h.n
        if i == p:
            return True
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"minor search exceeded {self.budget} nodes")
        key = (i, used, tuple(self.sets[j] for j in self.live[i]))
        if key in self.failed:
            return False
        if not self._future_feasible(i, used):
            self.failed.add(key)
            return False
        g = self.g
        free = ((1 << g.n) - 1) & ~used
        req = [self.sets[l] for l in self.before[i]]
        if i == p - 1:
            rest = free
            while rest:
                c = _component_of(g, (rest & -rest).bit_length() - 1, free)
                nb = _neighbourhood(g, c)
                if all(nb & s for s in req):
                    self.sets[i] = c
                    return True
                rest &= ~c
            self.failed.add(key)
            return False
        roots = _neighbourhood(g, req[0]) & free if req else free
        if not req and not self.deg[i]:
            candidates = (1 << r for r in bits(roots))
        else:
            candidates = _connected_sets(g, roots, free, free.bit_count() - (p - i - 1))
        for s in candidates:
            nb = _neighbourhood(g, s)
            if nb.bit_count() < self.deg[i] or not all(nb & t for t in req):
                continue
            self.sets[i] = s
            if self._place(i + 1, used | s):
                return True
        self.sets[i] = 0
        self.failed.add(key)
        return False


def _is_two_connected(h: Graph) -> bool:
    if h.n < 3 or not h.is_connected():
        return False
    bl = blocks(h)
    return len(bl) == 1 and bl[0] == (1 << h.n) - 1


def find_minor_model(g: Graph, h: Graph, budget: int = DEFAULT_MINOR_BUDGET) -> Witness | None:
    """Branch sets realising ``h`` as a minor of ``g``, or ``None``.

    When every vertex of ``h`` has degree at least 2 the search runs on the
    2-core of ``g``; when ``h`` is 2-connected it runs block by block.
    """
    if h.n > MAX_MINOR_PATTERN:
        raise BudgetExceeded(f"minor patterns are limited to {MAX_MINOR_PATTERN} vertices")
    if h.n == 0:
        return Witness("minor-model", branch_sets=())
    if h.n > g.n or h.m > g.m:
        return None
    pieces = [(1 << g.n) - 1]
    if h.min_degree() >= 2:
        core = to_mask(peel_vertices(g, 1))
        if _is_two_connected(h):
            sub = g.induced_subgraph(bits(core))
            idx = list(bits(core))
            pieces = [to_mask(idx[v] for v in bits(b)) for b in blocks(sub)]
        else:
            pieces = [core]
    for piece in pieces:
        verts = list(bits(piece))
        sub = g.induced_subgraph(verts)
        if sub.n < h.n or sub.m < h.m:
            continue
        model = _MinorSearch(sub, h, budget).run()
        if model is not None:
            return Witness("minor-model", branch_sets=tuple(frozenset(verts[v] for v in s) for s in model))
    return None


def contains_minor(g: Graph, h: Graph, budget: int = DEFAULT_MINOR_BUDGET) -> bool:
    return find_minor_model(g, h, budget) is not None


def is_outerplanar(g: Graph, prefilter: bool = True, budget: int = DEFAULT_MINOR_BUDGET,
                   method: str = "minor") -> bool:
    """No K_4 minor and no K_{2,3} minor.

    With ``prefilter`` a component with more than 2n - 3 edges is rejected
    before any search. ``method="reduction"`` decides the same property by
    degree-2 reduction of each block, which is much faster.
    """
    if prefilter:
        for comp in g.component_masks():
            nc = comp.bit_count()
            mc = sum((g.adj(v) & comp).bit_count() for v in bits(comp)) // 2
            if nc >= 2 and mc > 2 * nc - 3:
                return False
    if method == "reduction":
        return all(_outerplanar_block(g, b) for b in blocks(g) if b.bit_count() > 3)
    if method != "minor":
        raise ValueError(f"unknown method {method!r}")
    return not contains_minor(g, K4, budget) and not contains_minor(g, K23, budget)


def _outerplanar_block(g: Graph, block: int) -> bool:
    """Outerplanarity of a 2-connected block.

    A 2-connected outerplanar graph on at least four vertices has a degree-2
    vertex v, with neighbours u and w. Removing v and adding uw keeps it
    2-connected, and the block is outerplanar exactly when the reduced graph
    is outerplanar with uw on its outer cycle. An edge of a 2-connected
    outerplanar graph is on the outer cycle iff deleting both ends leaves
    the rest connected.
    """
    return _reduce({v: g.adj(v) & block for v in bits(block)})


def _reduce(rows: dict[int, int]) -> bool:
    if len(rows) <= 3:
        return True
    v = next((v for v, r in rows.items() if r.bit_count() == 2), None)
    if v is None:
        return False
    u, w = bits(rows[v])
    rest = dict(rows)
    del rest[v]
    rest[u] = (rest[u] & ~(1 << v)) | 1 << w
    rest[w] = (rest[w] & ~(1 << v)) | 1 << u
    if not _reduce(rest):
        return False
    if len(rest) == 3:
        return True
    others = 0
    for x in rest:
        others |= 1 << x
    others &= ~(1 << u | 1 << w)
    start = others & -others
    seen = frontier = start
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nxt |= rest[x]
        frontier = nxt & others & ~seen
        seen |= frontier
    return seen == others


# brute force (independent of the searches above) -----------------------------


def brute_force_embedding(g: Graph, h: Graph) -> Witness | None:
    """Subgraph embedding of ``h`` found by trying every injective vertex map."""
    h_edges = h.edges()
    for image in permutations(range(g.n), h.n):
        if all(g.has_edge(image[u], image[v]) for u, v in h_edges):
            return Witness("tree-embedding", tuple(image))
    return None


def brute_force_cycle(g: Graph, length: int) -> Witness | None:
    for image in permutations(range(g.n), length):
        if image[0] != min(image):
            continue
        if all(g.has_edge(image[i - 1], image[i]) for i in range(length)):
            return Witness("cycle", tuple(image))
    return None
