"""Exhaustive harnesses for the spectral extremal statements.

Each harness is a plan: one or more graph streams, a per-graph work function
and a finaliser. Work items fold into a JSON-serialisable aggregate whose
merge is associative and independent of how the streams were sharded, so
sharded, resumed and parallel runs all finalise to the same report.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from itertools import combinations_with_replacement
from typing import Callable, Iterator

from . import checkpoint as ckpt
from .config import RunConfig
from .detect import (
    TreePattern, brute_force_cycle, brute_force_embedding, contains_all_trees,
    contains_anchored_path, contains_cycle, contains_tree, is_outerplanar,
)
from .enumeration import (
    EnumerationSpec, canonical_form, enumerate_free_trees, enumerate_keyed, shard_of,
)
from .formats import encode_graph6, parse_graph6
from .graph import Graph, complete_bipartite, find_bipartition, star_graph
from .spectral import rho_at_least_sqrt, spectral_radius

# float comparisons against a threshold are widened by this much
THRESHOLD_SLACK = 1e-9
# graphs this close to a threshold are decided in exact arithmetic
ESCALATE = 1e-6
# maximizers within this of each other count as tied
TIE = 1e-9
BATCH = 256


@dataclass
class TheoremReport:
    theorem: str
    params: dict
    population: int
    status: str  # holds | fails | not-applicable
    threshold: float | None = None
    maximizers: list = field(default_factory=list)  # (graph6, rho)
    margin: float | None = None
    unique: bool | None = None
    counterexamples: list = field(default_factory=list)  # (graph6, structure)
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0


# aggregate ------------------------------------------------------------------


def empty_state() -> dict:
    return {"population": 0, "top": [], "second": None, "cex": [], "counts": {},
            "best": {}, "first": {}, "members": {}}


def _trim_top(entries, seconds):
    """Split candidate (rho, stream, key) entries into the tied top and the runner-up."""
    if not entries:
        return [], max(seconds, default=None)
    best = max(e[0] for e in entries)
    top = sorted((e for e in entries if e[0] >= best - TIE), key=lambda e: (e[1], e[2]))
    rest = [e[0] for e in entries if e[0] < best - TIE] + list(seconds)
    return top, max(rest, default=None)


def merge_states(a: dict, b: dict) -> dict:
    """Combine two aggregates; associative and commutative."""
    out = empty_state()
    out["population"] = a["population"] + b["population"]
    seconds = [s for s in (a["second"], b["second"]) if s is not None]
    out["top"], out["second"] = _trim_top(a["top"] + b["top"], seconds)
    out["cex"] = sorted(a["cex"] + b["cex"])
    for name in set(a["counts"]) | set(b["counts"]):
        out["counts"][name] = a["counts"].get(name, 0) + b["counts"].get(name, 0)
    for name in set(a["best"]) | set(b["best"]):
        cands = [s["best"][name] for s in (a, b) if name in s["best"]]
        out["best"][name] = min(cands, key=lambda e: (-e[0], e[1], e[2]))
    for name in set(a["first"]) | set(b["first"]):
        out["first"][name] = min(s["first"][name] for s in (a, b) if name in s["first"])
    for name in set(a["members"]) | set(b["members"]):
        out["members"][name] = sorted(a["members"].get(name, []) + b["members"].get(name, []))
    for key in ("counts", "best", "first", "members"):
        out[key] = dict(sorted(out[key].items()))
    return out


def fold(state: dict, stream: int, key: str, item: dict) -> dict:
    """Add one work item; same result as merging a singleton aggregate."""
    single = empty_state()
    single["population"] = 1
    if item.get("cand"):
        single["top"] = [[item["rho"], stream, key]]
    if "cex" in item:
        single["cex"] = [[stream, key, item["cex"]]]
    single["counts"] = dict(item.get("counts", {}))
    single["best"] = {name: [v, stream, key] for name, v in item.get("best", {}).items()}
    single["first"] = {name: [stream, key] for name in item.get("first", ())}
    single["members"] = {name: [[stream, key]] for name in item.get("members", ())}
    return merge_states(state, single)


# streams ----------------------------------------------------------------------


@dataclass(frozen=True)
class FixedParts:
    """All bipartite graphs with parts X = 0..x-1 and Y = x..x+y-1, up to reordering X."""

    x: int
    y: int

    def graphs(self) -> Iterator[Graph]:
        x, y = self.x, self.y
        for masks in combinations_with_replacement(range(1 << y), x):
            edges = [(i, x + j) for i, mask in enumerate(masks) for j in range(y) if mask >> j & 1]
            yield Graph.from_edges(x + y, edges)


def _iter_stream(desc, shard, ceilings) -> Iterator[tuple[str, Graph]]:
    if isinstance(desc, EnumerationSpec):
        spec = replace(desc, shard=shard)
        for key, g in enumerate_keyed(spec, ceilings.get(spec.family())):
            yield key.decode("ascii"), g
    elif isinstance(desc, FixedParts):
        for g in desc.graphs():
            key = encode_graph6(g)
            if shard is None or shard_of(key.encode("ascii"), shard[1]) == shard[0]:
                yield key, g
    else:
        raise TypeError(f"unknown stream {desc!r}")


@dataclass
class Plan:
    theorem: str
    params: dict
    streams: list
    work: Callable  # (stream, key, graph) -> item
    finish: Callable  # (state, plan, config) -> TheoremReport
    info: dict = field(default_factory=dict)
    applicable: bool = True


def _call_work(work, args):
    stream, key, g = args
    return work(stream, key, g)


def execute(plan: Plan, config: RunConfig, *, resume: bool = False,
            progress: Callable | None = None) -> dict:
    """Fold the whole (shard of the) population; returns the aggregate state.

    With a checkpoint directory the state is saved after every batch; with
    ``resume`` a matching checkpoint is picked up where it stopped.
    ``progress(count)`` is called after every folded item.
    """
    state = empty_state()
    if not plan.applicable:
        return state
    run_hash = config.run_hash(plan.theorem, plan.params)
    directory = config.resolved_checkpoint_dir()
    path = ckpt.checkpoint_path(directory, config.run_id(plan.theorem, plan.params)) if directory else None
    start = ckpt.Progress(state=state)
    if path and resume:
        loaded = ckpt.load(path, run_hash)
        if loaded is not None:
            start = loaded
    state = start.state or empty_state()
    done = ckpt.Progress(start.stream, start.position, start.last_key, state)
    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for si, desc in enumerate(plan.streams):
            if si < start.stream:
                continue
            stream = enumerate(_iter_stream(desc, config.shard, config.ceilings))
            batch = []
            for pos, (key, g) in stream:
                if si == start.stream and pos <= start.position:
                    if pos == start.position and key != start.last_key:
                        raise ckpt.CheckpointError("checkpoint does not match the stream", path)
                    continue
                batch.append((pos, key, g))
                if len(batch) >= BATCH:
                    state = _fold_batch(plan, pool, si, batch, state, done, path, run_hash, config, progress)
                    batch = []
            if batch:
                state = _fold_batch(plan, pool, si, batch, state, done, path, run_hash, config, progress)
            done.stream, done.position, done.last_key = si + 1, -1, None
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    if path:
        ckpt.clear(path)
    return state


def _fold_batch(plan, pool, si, batch, state, done, path, run_hash, config, progress):
    args = [(si, key, g) for _, key, g in batch]
    if pool is None:
        results = map(partial(_call_work, plan.work), args)
    else:
        results = pool.map(partial(_call_work, plan.work), args)
    try:
        for (pos, key, _), item in zip(batch, results):
            state = fold(state, si, key, item)
            done.stream, done.position, done.last_key, done.state = si, pos, key, state
            if progress is not None:
                progress(state["population"])
    finally:
        if path and done.state is not None:
            ckpt.save(path, run_hash, config.shard, done)
    return state


def run_plan(plan: Plan, config: RunConfig | None = None, **kw) -> TheoremReport:
    config = config or RunConfig()
    t0 = time.perf_counter()
    state = execute(plan, config, **kw)
    report = finalize(plan, state, config)
    report.wall_time = time.perf_counter() - t0
    return report


def finalize(plan: Plan, state: dict, config: RunConfig) -> TheoremReport:
    if not plan.applicable:
        return TheoremReport(plan.theorem, plan.params, 0, "not-applicable", details=dict(plan.info))
    return plan.finish(state, plan, config)


# shared helpers -------------------------------------------------------------


def _key(g: Graph) -> str:
    return canonical_form(g).decode("ascii")


def at_least_threshold(g: Graph, q: int, rho: float) -> tuple[bool, str]:
    """Whether rho(g) >= sqrt(q), exactly when rho is within ESCALATE of it."""
    thr = math.sqrt(q)
    if abs(rho - thr) <= ESCALATE:
        ok, route = rho_at_least_sqrt(g, q)
        return ok, route
    return rho >= thr - THRESHOLD_SLACK, "float"


def _maximizers(state) -> tuple[list, float | None, bool | None]:
    top = [(key, rho) for rho, _, key in state["top"]]
    top.sort(key=lambda e: (-e[1], e[0]))
    if not top:
        return [], None, None
    margin = None if state["second"] is None else top[0][1] - state["second"]
    return top, margin, len(top) == 1


def _status(cex) -> str:
    return "fails" if cex else "holds"


def _cex_list(state):
    return [(key, structure) for _, key, structure in state["cex"]]


def _connected(config) -> bool:
    return not config.include_disconnected


# cycle theorem and its triangle-free generalisation -------------------------


def _cycle_work(n, k, tkey, tol, stream, key, g):
    L = 2 * k + 2
    res = spectral_radius(g, tol)
    w = contains_cycle(g, L)
    if w is not None and not w.validate(g):
        raise RuntimeError(f"invalid cycle witness on {key}")
    above, route = at_least_threshold(g, k * (n - k), res.rho)
    item = {"rho": res.rho, "cand": w is None,
            "counts": {"above_threshold": int(above), "exact_decisions": int(route != "float")}}
    if above and w is None and key != tkey:
        if brute_force_cycle(g, L) is not None:
            raise RuntimeError(f"cycle detectors disagree on {key}")
        item["cex"] = f"C{L}"
    return item


def _cycle_finish(state, plan, config):
    top, margin, unique = _maximizers(state)
    tkey = plan.info["threshold_graph"]
    details = dict(plan.info)
    details.update(state["counts"])
    details["threshold_graph_is_unique_maximizer"] = bool(unique and top[0][0] == tkey)
    n, k = plan.params["n"], plan.params["k"]
    return TheoremReport(plan.theorem, plan.params, state["population"], _status(state["cex"]),
                         threshold=math.sqrt(k * (n - k)), maximizers=top, margin=margin,
                         unique=unique, counterexamples=_cex_list(state), details=details)


def _cycle_plan(theorem, n, k, config, triangle_free):
    params = {"n": n, "k": k}
    if k < 1 or n < 2 * k + 2:
        return Plan(theorem, params, [], None, None, {"reason": "requires k >= 1 and n >= 2k+2"},
                    applicable=False)
    if triangle_free:
        spec = EnumerationSpec(n, connected=_connected(config), cycle_free=(3,))
    else:
        spec = EnumerationSpec(n, connected=_connected(config), bipartite=True)
    tkey = _key(complete_bipartite(k, n - k))
    work = partial(_cycle_work, n, k, tkey, config.tolerance)
    info = {"threshold_graph": tkey, "cycle_length": 2 * k + 2}
    return Plan(theorem, params, [spec], work, _cycle_finish, info)


def verify_cycle_theorem(n: int, k: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """Bipartite graphs with rho >= sqrt(k(n-k)) contain C_{2k+2} unless they are K_{k,n-k}.

    Maximizers are taken over the C_{2k+2}-free graphs of the population.
    """
    config = config or RunConfig()
    return run_plan(_cycle_plan("cycle", n, k, config, False), config, **kw)


def verify_c3free_generalization(n: int, k: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """The cycle statement over connected triangle-free graphs."""
    config = config or RunConfig()
    return run_plan(_cycle_plan("c3free", n, k, config, True), config, **kw)


# tree theorem ---------------------------------------------------------------


def _tree_work(n, k, tkey, tol, stream, key, g):
    res = spectral_radius(g, tol)
    above, route = at_least_threshold(g, k * (n - k), res.rho)
    item = {"rho": res.rho, "counts": {"above_threshold": int(above), "exact_decisions": int(route != "float")}}
    if not above:
        return item
    ok, missing = contains_all_trees(g, 2 * k + 3)
    if ok:
        return item
    item["cand"] = True
    if brute_force_embedding(g, missing.tree) is not None:
        raise RuntimeError(f"tree detectors disagree on {key}")
    structure = "T:" + _key(missing.tree)
    if key == tkey:
        item["members"] = ["threshold_graph_misses:" + structure]
    else:
        item["cex"] = structure
    return item


def _tree_finish(state, plan, config):
    top, margin, unique = _maximizers(state)
    details = dict(plan.info)
    details.update(state["counts"])
    missing = [name.split(":", 1)[1] for name in state["members"] if name.startswith("threshold_graph_misses:")]
    details["threshold_graph_missing_tree"] = missing[0] if missing else None
    n, k = plan.params["n"], plan.params["k"]
    return TheoremReport(plan.theorem, plan.params, state["population"], _status(state["cex"]),
                         threshold=math.sqrt(k * (n - k)), maximizers=top, margin=margin, unique=unique,
                         counterexamples=_cex_list(state), details=details)


def tree_plan(n, k, config):
    params = {"n": n, "k": k}
    if k < 2 or n < 2 * k + 3:
        return Plan("tree", params, [], None, None, {"reason": "requires k >= 2 and n >= 2k+3"},
                    applicable=False)
    tkey = _key(complete_bipartite(k, n - k))
    spec = EnumerationSpec(n, connected=_connected(config), bipartite=True)
    info = {"threshold_graph": tkey, "tree_order": 2 * k + 3}
    return Plan("tree", params, [spec], partial(_tree_work, n, k, tkey, config.tolerance), _tree_finish, info)


def verify_tree_theorem(n: int, k: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """Graphs at or above sqrt(k(n-k)) other than K_{k,n-k} contain every tree of order 2k+3.

    Only claimed for large n, so ``fails`` is a legitimate outcome here.
    Maximizers are taken over the above-threshold graphs missing some tree.
    """
    config = config or RunConfig()
    return run_plan(tree_plan(n, k, config), config, **kw)


def tree_theorem_sweep(ns, k: int, config: RunConfig | None = None) -> tuple[list, int | None]:
    """Reports for each n, plus the smallest tested n from which every later n held."""
    reports = [verify_tree_theorem(n, k, config) for n in sorted(ns)]
    holds_from = None
    for rep in reversed(reports):
        if rep.status != "holds":
            break
        holds_from = rep.params["n"]
    return reports, holds_from


# outerplanar maximizer --------------------------------------------------------


@dataclass(frozen=True)
class ClaimDiagnostics:
    """Margins of the three structural claims about the outerplanar maximizer.

    Positive ``degree_margin`` and ``entry_margin`` and a zero
    ``dominating_margin`` mean the respective claim holds for this graph.
    """

    z: int
    degree_margin: float
    entry_margin: float
    dominating_margin: int

    @property
    def holds(self) -> tuple[bool, bool, bool]:
        return self.degree_margin > 0, self.entry_margin > 0, self.dominating_margin == 0


def diagnose_outerplanar_claims(g: Graph, tol: float = 1e-10) -> ClaimDiagnostics:
    if g.n < 2 or not g.is_connected() or find_bipartition(g) is None or not is_outerplanar(g):
        raise ValueError("diagnostics need a connected outerplanar bipartite graph")
    res = spectral_radius(g, tol)
    x, n, z = res.perron, g.n, res.z
    root = math.sqrt(n)
    degree_margin = min(g.degree(u) - (x[u] * n - 7 * root) for u in range(n))
    others = [x[u] for u in range(n) if u != z]
    entry_margin = 15 / root - max(others)
    return ClaimDiagnostics(z, float(degree_margin), float(entry_margin), g.degree(z) - (n - 1))


def _rho_work(tol, stream, key, g):
    return {"rho": spectral_radius(g, tol).rho, "cand": True}


def _outerplanar_finish(state, plan, config):
    top, margin, unique = _maximizers(state)
    n = plan.params["n"]
    details = dict(plan.info)
    skey = details["star"]
    details["star_is_unique_maximizer"] = bool(unique and top[0][0] == skey)
    rechecks = []
    for key, rho in top:
        g = parse_graph6(key)
        again = spectral_radius(g, 1e-12).rho
        rechecks.append(again)
        diag = diagnose_outerplanar_claims(g)
        details.setdefault("claims", []).append({
            "graph6": key, "z": diag.z, "degree_margin": diag.degree_margin,
            "entry_margin": diag.entry_margin, "dominating_margin": diag.dominating_margin,
        })
    details["rho_recheck"] = rechecks
    details["star_rho"] = math.sqrt(n - 1)
    return TheoremReport(plan.theorem, plan.params, state["population"], "not-applicable",
                         maximizers=top, margin=margin, unique=unique, details=details)


def outerplanar_plan(n, config):
    params = {"n": n}
    if n < 2:
        return Plan("outerplanar", params, [], None, None, {"reason": "requires n >= 2"}, applicable=False)
    spec = EnumerationSpec(n, connected=_connected(config), bipartite=True, outerplanar=True)
    return Plan("outerplanar", params, [spec], partial(_rho_work, config.tolerance),
                _outerplanar_finish, {"star": _key(star_graph(n - 1))})


def verify_outerplanar_theorem(n: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """Spectral maximizer among connected outerplanar bipartite graphs of order n.

    The statement is only claimed for very large n, so the status is always
    ``not-applicable``; ``details["star_is_unique_maximizer"]`` is the finding.
    """
    config = config or RunConfig()
    return run_plan(outerplanar_plan(n, config), config, **kw)


# path lemma -------------------------------------------------------------------


def path_lemma_bound(x: int, y: int, r: int) -> int:
    return (r - 1) * x + r * y - r * (r - 1)


def _path_work(r, streams, stream, key, g):
    x, y = streams[stream]
    w = contains_anchored_path(g, range(x), r)
    if w is not None:
        if not (w.validate(g) and w.vertices[0] < x and w.vertices[-1] < x):
            raise RuntimeError(f"invalid anchored path witness on {key}")
        return {"counts": {"with_path": 1}}
    bound = path_lemma_bound(x, y, r)
    item = {"counts": {"path_free": 1}, "best": {f"slack:{x},{y}": g.m - bound}}
    if g.m > bound:
        item["cex"] = f"e={g.m}>{bound}"
    elif g.m == bound:
        item["members"] = ["equality"]
    return item


def _path_finish(state, plan, config):
    r = plan.params["r"]
    streams = plan.info["parts"]
    found = {(streams[s][0], streams[s][1], key) for s, key in state["members"].get("equality", [])}
    expected = set()
    for x, y in streams:
        if x == r or y == r - 1:
            expected.add((x, y, encode_graph6(complete_bipartite(x, y))))
    details = {
        "counts": state["counts"],
        "equality_cases": sorted([x, y, key] for x, y, key in found),
        "equality_matches_characterization": found == expected,
        "unexpected_equality": sorted([x, y, key] for x, y, key in found - expected),
        "missing_equality": sorted([x, y, key] for x, y, key in expected - found),
    }
    return TheoremReport(plan.theorem, plan.params, state["population"], _status(state["cex"]),
                         counterexamples=_cex_list(state), details=details)


def verify_path_lemma(xmax: int, ymax: int, r: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """Edge bound for bipartite graphs with no P_{2r+1} ending twice in X.

    Quantifies over every graph with parts |X| in [r, xmax], |Y| in [r-1, ymax];
    equality cases are compared with the literal characterization.
    """
    config = config or RunConfig()
    return run_plan(path_lemma_plan(xmax, ymax, r, config), config, **kw)


def path_lemma_plan(xmax, ymax, r, config):
    params = {"xmax": xmax, "ymax": ymax, "r": r}
    if r < 2 or xmax < r or ymax < r - 1:
        return Plan("path-lemma", params, [], None, None, {"reason": "requires r >= 2"}, applicable=False)
    parts = [(x, y) for x in range(r, xmax + 1) for y in range(r - 1, ymax + 1)]
    streams = [FixedParts(x, y) for x, y in parts]
    return Plan("path-lemma", params, streams, partial(_path_work, r, tuple(parts)), _path_finish,
                {"parts": parts})


# outerplanar edge bounds ----------------------------------------------------------


def _edge_work(n, stream, key, g):
    item = {"counts": {}, "best": {f"max_edges:{stream}": g.m}}
    if stream == 0:
        if g.m > 2 * n - 3:
            item["cex"] = "m>2n-3"
        elif g.m == 2 * n - 3:
            item["first"] = ["tight_outerplanar"]
    else:
        if 2 * g.m > 3 * n - 4:
            item["cex"] = "m>(3n-4)/2"
        elif 2 * g.m == 3 * n - 4:
            item["first"] = ["tight_bipartite"]
    if "cex" in item and is_outerplanar(g, prefilter=False):
        item["counts"]["confirmed_outerplanar"] = 1
    return item


def _edge_finish(state, plan, config):
    n = plan.params["n"]
    best = state["best"]
    details = {
        "outerplanar_bound": 2 * n - 3,
        "bipartite_bound": (3 * n - 4) / 2,
        "max_edges_outerplanar": best.get("max_edges:0", [None])[0],
        "max_edges_bipartite": best.get("max_edges:1", [None])[0],
        "tight_outerplanar": state["first"].get("tight_outerplanar", [None, None])[1],
        "tight_bipartite": state["first"].get("tight_bipartite", [None, None])[1],
    }
    return TheoremReport(plan.theorem, plan.params, state["population"], _status(state["cex"]),
                         counterexamples=_cex_list(state), details=details)


def verify_edge_bounds(n: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """m <= 2n-3 for connected outerplanar graphs, m <= (3n-4)/2 when also bipartite.

    Outerplanarity is decided without the edge-count prefilter so the bound
    is never assumed while it is being checked.
    """
    config = config or RunConfig()
    return run_plan(edge_bounds_plan(n, config), config, **kw)


def edge_bounds_plan(n, config):
    params = {"n": n}
    if n < 2:
        return Plan("edge-bounds", params, [], None, None, {"reason": "requires n >= 2"}, applicable=False)
    conn = _connected(config)
    streams = [
        EnumerationSpec(n, connected=conn, outerplanar=True, outerplanar_prefilter=False),
        EnumerationSpec(n, connected=conn, bipartite=True, outerplanar=True, outerplanar_prefilter=False),
    ]
    return Plan("edge-bounds", params, streams, partial(_edge_work, n), _edge_finish)


# Turan number of trees ----------------------------------------------------------


def _turan_work(n, t, stream, key, g):
    item = {"best": {f"max_edges:{stream}": g.m}}
    if g.m > (t - 2) * n:
        item["cex"] = f"m={g.m}>{(t - 2) * n}"
    return item


def _turan_finish(state, plan, config):
    n, t = plan.params["n"], plan.params["t"]
    per_tree = []
    for i, tkey in enumerate(plan.info["trees"]):
        best = state["best"].get(f"max_edges:{i}")
        per_tree.append({"tree": tkey, "max_edges": best[0] if best else None,
                         "extremal": best[2] if best else None})
    details = {"bound": (t - 2) * n, "trees": per_tree}
    return TheoremReport(plan.theorem, plan.params, state["population"], _status(state["cex"]),
                         counterexamples=_cex_list(state), details=details)


def verify_turan_tree_bound(n: int, t: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """ex(n, T) <= (t-2)n for every tree T of order t, over all graphs of order n."""
    config = config or RunConfig()
    return run_plan(turan_plan(n, t, config), config, **kw)


def turan_plan(n, t, config):
    params = {"n": n, "t": t}
    if t < 2 or n < 1:
        return Plan("turan-tree", params, [], None, None, {"reason": "requires t >= 2"}, applicable=False)
    trees = list(enumerate_free_trees(t))
    streams = [EnumerationSpec(n, tree_free=(T,)) for T in trees]
    return Plan("turan-tree", params, streams, partial(_turan_work, n, t), _turan_finish,
                {"trees": [_key(T.tree) for T in trees]})


# spectral sandwich --------------------------------------------------------------


def _sandwich_work(tol, stream, key, g):
    return {"best": {f"rho:{stream}": spectral_radius(g, tol).rho}}


def _sandwich_finish(state, plan, config):
    n, k = plan.params["n"], plan.params["k"]
    lower, upper = math.sqrt(k * (n - k)), math.sqrt((2 * k + 1) * n)
    per_tree, cex = [], []
    for i, info in enumerate(plan.info["trees"]):
        best = state["best"].get(f"rho:{i}")
        entry = dict(info)
        if best is None:
            entry.update(maximizer=None, rho=None, lower_ok=False, upper_ok=True)
            cex.append((info["tree"], "empty-population"))
            per_tree.append(entry)
            continue
        rho, _, key = best
        g = parse_graph6(key)
        lower_ok = at_least_threshold(g, k * (n - k), rho)[0]
        upper_ok = rho * rho <= g.m + THRESHOLD_SLACK and g.m <= (2 * k + 1) * n
        entry.update(maximizer=key, rho=rho, edges=g.m, lower_ok=lower_ok, upper_ok=upper_ok)
        if not lower_ok:
            cex.append((key, "lower:" + info["tree"]))
        if not upper_ok:
            cex.append((key, "upper:" + info["tree"]))
        per_tree.append(entry)
    details = {"lower": lower, "upper": upper, "trees": per_tree}
    return TheoremReport(plan.theorem, plan.params, state["population"], _status(cex),
                         threshold=lower, counterexamples=cex, details=details)


def verify_spectral_sandwich(n: int, k: int, config: RunConfig | None = None, **kw) -> TheoremReport:
    """sqrt(k(n-k)) <= rho(G_{n,T}) <= sqrt((2k+1)n) for every tree T of order 2k+3.

    G_{n,T} is the spectral maximizer among all T-free bipartite graphs of
    order n, connected or not; restricted to connected graphs the lower bound
    already fails at n = 9. Whether K_{k,n-k} is itself T-free is recorded
    per tree.
    """
    config = config or RunConfig()
    return run_plan(sandwich_plan(n, k, config), config, **kw)


def sandwich_plan(n, k, config):
    params = {"n": n, "k": k}
    if k < 2 or n < k + 2:
        return Plan("sandwich", params, [], None, None, {"reason": "requires k >= 2 and n >= k+2"},
                    applicable=False)
    threshold_graph = complete_bipartite(k, n - k)
    trees = list(enumerate_free_trees(2 * k + 3))
    streams = [EnumerationSpec(n, bipartite=True, tree_free=(T,)) for T in trees]
    info = {"trees": [{"tree": _key(T.tree),
                       "threshold_graph_in_population": contains_tree(threshold_graph, T) is None}
                      for T in trees]}
    return Plan("sandwich", params, streams, partial(_sandwich_work, config.tolerance),
                _sandwich_finish, info)


# dispatch ---------------------------------------------------------------------


PARAMS = {
    "cycle": ("n", "k"),
    "c3free": ("n", "k"),
    "tree": ("n", "k"),
    "outerplanar": ("n",),
    "path-lemma": ("xmax", "ymax", "r"),
    "edge-bounds": ("n",),
    "turan-tree": ("n", "t"),
    "sandwich": ("n", "k"),
}


def build_plan(theorem: str, config: RunConfig, **params) -> Plan:
    """Plan for a theorem id with integer parameters, as used by the CLI."""
    builders = {
        "cycle": lambda n, k: _cycle_plan("cycle", n, k, config, False),
        "c3free": lambda n, k: _cycle_plan("c3free", n, k, config, True),
        "tree": lambda n, k: tree_plan(n, k, config),
        "outerplanar": lambda n: outerplanar_plan(n, config),
        "path-lemma": lambda xmax, ymax, r: path_lemma_plan(xmax, ymax, r, config),
        "edge-bounds": lambda n: edge_bounds_plan(n, config),
        "turan-tree": lambda n, t: turan_plan(n, t, config),
        "sandwich": lambda n, k: sandwich_plan(n, k, config),
    }
    if theorem not in builders:
        raise ValueError(f"unknown theorem {theorem!r}")
    return builders[theorem](*(params[name] for name in PARAMS[theorem]))
