"""Isomorph-free generation of graph families and free trees.

Graphs of order n are grown from graphs of order n - 1 by adding one vertex
with every admissible neighbourhood, then deduplicated by canonical form.
Every supported constraint is hereditary under deletion of a suitable vertex
(a non-cut vertex for the connected families), so each level only needs the
previous level's survivors.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .detect import TreePattern, contains_cycle, contains_tree, is_outerplanar
from .errors import BudgetExceeded
from .formats import encode_graph6
from .graph import Graph, bits, find_bipartition, to_mask

DEFAULT_CEILINGS = {"tree": 12, "outerplanar": 12, "bipartite": 10, "general": 8}


# canonical form -----------------------------------------------------------


def _refine(rows, cells):
    """Split cells by neighbour counts into every cell until nothing changes."""
    while True:
        masks = [to_mask(c) for c in cells]
        out = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups = {}
            for v in cell:
                sig = tuple((rows[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(cell)
                continue
            changed = True
            out.extend(groups[sig] for sig in sorted(groups))
        cells = out
        if not changed:
            return cells


def _orbit_roots(n, generators):
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for gen in generators:
        for v, w in enumerate(gen):
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return find


@lru_cache(maxsize=1 << 16)
def canonical_labeling(g: Graph) -> tuple[int, ...]:
    """``perm`` with ``g.relabel(perm)`` the canonical representative.

    Colour refinement, then individualisation of the first non-singleton
    cell, keeping the leaf whose relabelled adjacency rows are largest.
    Two leaves with the same rows give an automorphism, used to skip
    branches that lie in the same orbit as one already explored.
    """
    n = g.n
    if n == 0:
        return ()
    rows = g.rows
    by_degree = {}
    for v in range(n):
        by_degree.setdefault(rows[v].bit_count(), []).append(v)
    cells = _refine(rows, [by_degree[d] for d in sorted(by_degree)])
    seen = {}
    autos = []
    best = [None, None]

    def leaf(cells):
        lab = [c[0] for c in cells]
        pos = [0] * n
        for p, v in enumerate(lab):
            pos[v] = p
        code = tuple(to_mask(pos[u] for u in bits(rows[v])) for v in lab)
        prev = seen.get(code)
        if prev is not None:
            gamma = [0] * n
            for p in range(n):
                gamma[prev[p]] = lab[p]
            autos.append(gamma)
            return
        seen[code] = lab
        if best[0] is None or code > best[0]:
            best[0], best[1] = code, pos

    def search(cells, fixed):
        idx = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if idx is None:
            leaf(cells)
            return
        cell = cells[idx]
        done = []
        for v in cell:
            if done:
                gens = [a for a in autos if all(a[f] == f for f in fixed)]
                if gens:
                    find = _orbit_roots(n, gens)
                    if any(find(v) == find(d) for d in done):
                        continue
            done.append(v)
            child = cells[:idx] + [[v], [u for u in cell if u != v]] + cells[idx + 1:]
            search(_refine(rows, child), fixed + [v])

    search(cells, [])
    return tuple(best[1])


def canonical_form(g: Graph) -> bytes:
    """Key that is equal for two graphs exactly when they are isomorphic."""
    return encode_graph6(g.relabel(canonical_labeling(g))).encode("ascii")


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_labeling(g))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)


# enumeration ----------------------------------------------------------------


def shard_of(key: bytes, m: int) -> int:
    """Stable shard index of a canonical key among ``m`` shards."""
    return zlib.crc32(key) % m


@dataclass(frozen=True)
class EnumerationSpec:
    """Order, constraints and optional shard ``(i, m)`` of an enumeration."""

    n: int
    connected: bool = False
    bipartite: bool = False
    outerplanar: bool = False
    tree: bool = False
    cycle_free: tuple[int, ...] = ()
    tree_free: tuple[TreePattern, ...] = ()
    shard: tuple[int, int] | None = None
    outerplanar_prefilter: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"order must be at least 1, got {self.n}")
        if self.tree:
            object.__setattr__(self, "connected", True)
        object.__setattr__(self, "cycle_free", tuple(sorted(set(self.cycle_free))))
        if any(L < 3 for L in self.cycle_free):
            raise ValueError("forbidden cycle lengths must be at least 3")
        object.__setattr__(self, "tree_free", tuple(self.tree_free))
        if self.shard is not None:
            i, m = self.shard
            if m < 1 or not 0 <= i < m:
                raise ValueError(f"bad shard {i}/{m}")

    def constraints(self) -> tuple:
        return (self.connected, self.bipartite, self.outerplanar, self.tree,
                self.cycle_free, self.tree_free, self.outerplanar_prefilter)

    def family(self) -> str:
        if self.tree:
            return "tree"
        if self.outerplanar:
            return "outerplanar"
        if self.bipartite:
            return "bipartite"
        return "general"


def _children(p: Graph, cons) -> Iterator[Graph]:
    connected, bipartite, _, tree, cycle_free, _, _ = cons
    n0 = p.n
    rows = p.rows
    if tree:
        masks = [1 << v for v in range(n0)]
    else:
        masks = range(1 if connected else 0, 1 << n0)
    sides = None
    if bipartite and not tree:
        part = find_bipartition(p)
        sides = [(comp & to_mask(part.X), comp & to_mask(part.Y)) for comp in p.component_masks()]
    triangle_free = 3 in cycle_free
    outerplanar = cons[2]
    for s in masks:
        if sides is not None and any(s & x and s & y for x, y in sides):
            continue
        if triangle_free and any(rows[v] & s for v in bits(s)):
            continue
        new = [r | (1 << n0 if s >> v & 1 else 0) for v, r in enumerate(rows)]
        new.append(s)
        child = Graph(n0 + 1, new, _check=False)
        if outerplanar and not is_outerplanar(child, prefilter=cons[6], method="reduction"):
            continue
        yield child


def _accept(g: Graph, cons) -> bool:
    _, _, outerplanar, _, cycle_free, tree_free, prefilter = cons
    for L in cycle_free:
        if L != 3 and contains_cycle(g, L) is not None:
            return False
    for T in tree_free:
        if contains_tree(g, T) is not None:
            return False
    if outerplanar and not prefilter and not is_outerplanar(g, prefilter=False):
        return False
    return True


@lru_cache(maxsize=None)
def _level(cons, n) -> tuple[tuple[bytes, Graph], ...]:
    if n == 1:
        g = Graph(1, [0])
        return ((canonical_form(g), g),) if _accept(g, cons) else ()
    found = {}
    for _, parent in _level(cons, n - 1):
        for child in _children(parent, cons):
            key = canonical_form(child)
            if key not in found:
                found[key] = child
    out = []
    for key in sorted(found):
        child = found[key]
        if _accept(child, cons):
            out.append((key, canonical_graph(child)))
    return tuple(out)


def enumerate_keyed(spec: EnumerationSpec, ceiling: int | None = None) -> Iterator[tuple[bytes, Graph]]:
    """(canonical key, canonical graph) pairs in key order."""
    limit = DEFAULT_CEILINGS[spec.family()] if ceiling is None else ceiling
    if spec.n > limit:
        raise BudgetExceeded(f"order {spec.n} exceeds the {spec.family()} ceiling {limit}")
    for key, g in _level(spec.constraints(), spec.n):
        if spec.shard is None or shard_of(key, spec.shard[1]) == spec.shard[0]:
            yield key, g


def enumerate_graphs(spec: EnumerationSpec, ceiling: int | None = None) -> Iterator[Graph]:
    """One graph per isomorphism class meeting ``spec``, in canonical order."""
    for _, g in enumerate_keyed(spec, ceiling):
        yield g


def enumerate_free_trees(t: int, ceiling: int | None = None) -> Iterator[TreePattern]:
    """All unlabelled trees of order ``t`` in canonical order."""
    if t < 1:
        raise ValueError(f"tree order must be at least 1, got {t}")
    for g in enumerate_graphs(EnumerationSpec(t, tree=True), ceiling):
        yield TreePattern(g)
