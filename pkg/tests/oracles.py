"""Independent reference implementations used to derive expected values.

Nothing here imports the search or canonical-form code under test; graphs
are plain networkx objects, deduplicated with networkx isomorphism.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

import networkx as nx
from networkx.algorithms import isomorphism


@lru_cache(maxsize=None)
def labeled_classes(n: int) -> tuple:
    """One networkx graph per isomorphism class on n vertices, from all 2^(n choose 2) edge sets."""
    pairs = list(combinations(range(n), 2))
    buckets = {}
    for mask in range(1 << len(pairs)):
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(p for i, p in enumerate(pairs) if mask >> i & 1)
        h = (g.number_of_edges(), tuple(sorted(d for _, d in g.degree())), nx.weisfeiler_lehman_graph_hash(g))
        reps = buckets.setdefault(h, [])
        if not any(nx.is_isomorphic(g, r) for r in reps):
            reps.append(g)
    return tuple(g for reps in buckets.values() for g in reps)


def prufer_trees(t: int) -> list:
    """Free trees of order t: decode every Pruefer sequence, dedupe by isomorphism."""
    if t == 1:
        g = nx.Graph()
        g.add_node(0)
        return [g]
    if t == 2:
        return [nx.path_graph(2)]
    reps = []
    for seq in product(range(t), repeat=t - 2):
        g = nx.from_prufer_sequence(list(seq))
        if not any(nx.is_isomorphic(g, r) for r in reps):
            reps.append(g)
    return reps


def is_outerplanar(g: nx.Graph) -> bool:
    """Outerplanar iff adding a vertex joined to everything keeps it planar."""
    h = g.copy()
    apex = max(h.nodes, default=-1) + 1
    h.add_edges_from((apex, v) for v in g.nodes)
    h.add_node(apex)
    return nx.check_planarity(h)[0]


def has_cycle(g: nx.Graph, length: int) -> bool:
    return any(len(c) == length for c in nx.simple_cycles(g, length_bound=length))


def contains_subgraph(g: nx.Graph, pattern: nx.Graph) -> bool:
    gm = isomorphism.GraphMatcher(g, pattern)
    return any(True for _ in gm.subgraph_monomorphisms_iter())


def to_nx(g) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h
