import sys
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from bipextremal.graph import Graph  # noqa: E402


def from_nx(h: nx.Graph) -> Graph:
    h = nx.convert_node_labels_to_integers(h)
    return Graph.from_edges(h.number_of_nodes(), h.edges())


@st.composite
def graphs(draw, min_n=0, max_n=10, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for v in range(n) for u in range(v)]
    if p is None:
        keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        seed = draw(st.integers(0, 2**32 - 1))
        import random
        rng = random.Random(seed)
        keep = [rng.random() < p for _ in pairs]
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def bipartite_graphs(draw, max_side=7):
    s = draw(st.integers(1, max_side))
    t = draw(st.integers(1, max_side))
    pairs = [(u, s + v) for u in range(s) for v in range(t)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(s + t, [e for e, k in zip(pairs, keep) if k])


@pytest.fixture(scope="session")
def atlas():
    """Every graph on at most 7 vertices (networkx graph atlas), as package graphs."""
    return [from_nx(h) for h in nx.graph_atlas_g()[1:]]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, title = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
