"""Command-line interface.

Exit codes: 0 finished (whatever the verified status), 1 usage or input
error, 2 search budget or eigensolver convergence failure, 130 interrupted.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import checkpoint as ckpt
from .config import CHECKPOINT_ENV, RunConfig
from .detect import (
    TreePattern, contains_all_trees, contains_anchored_path, contains_cycle, contains_tree,
    find_minor_model, is_outerplanar, DEFAULT_MINOR_BUDGET,
)
from .enumeration import DEFAULT_CEILINGS, EnumerationSpec, enumerate_free_trees, enumerate_keyed
from .errors import BudgetExceeded, ConvergenceError, ParseError
from .formats import encode_graph6, parse_graph6
from .graph import find_bipartition, peel_vertices
from .records import (
    MergeError, dumps, merge_partials, partial_record, report_record, summary_record, tsv_header,
    tsv_row,
)
from .spectral import (
    certify_lower, gamma_of, lower_certificate, spectral_radius, upper_bound_local,
)
from .verify import PARAMS, build_plan, execute, finalize

THEOREMS = tuple(PARAMS)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _shard(text: str) -> tuple[int, int]:
    try:
        i, m = (int(p) for p in text.split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like i/m, got {text!r}")
    if m < 1 or not 0 <= i < m:
        raise argparse.ArgumentTypeError(f"shard index out of range: {text}")
    return i, m


def _graph(text: str):
    if text == "-":
        text = sys.stdin.readline()
    return parse_graph6(text.strip())


def _emit(obj) -> None:
    print(dumps(obj) if isinstance(obj, dict) else obj)


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# subcommands ------------------------------------------------------------------


def cmd_rho(a):
    res = spectral_radius(_graph(a.graph6), a.tolerance, method=a.method)
    print(_fmt(res.rho))


def cmd_certify(a):
    g = _graph(a.graph6)
    res = spectral_radius(g, a.tolerance)
    cert = lower_certificate(g, slack=Fraction(a.slack), digits=a.digits, result=res)
    out = {"rho": float(_fmt(res.rho)), "lower": _frac(cert.c), "lower_verified": certify_lower(g, cert.witness, cert.c)}
    if find_bipartition(g) is not None:
        out["upper_local"] = upper_bound_local(g).c
    if res.z is not None:
        out["z"] = res.z
        out["gamma"] = gamma_of(g, res.z)
    _emit(out)


def _witness_out(w):
    if w is None:
        return {"found": False}
    out = {"found": True, "kind": w.kind}
    if w.vertices:
        out["vertices"] = list(w.vertices)
    if w.branch_sets:
        out["branch_sets"] = [sorted(s) for s in w.branch_sets]
    return out


def cmd_contains_cycle(a):
    _emit(_witness_out(contains_cycle(_graph(a.graph6), a.length)))


def cmd_contains_tree(a):
    _emit(_witness_out(contains_tree(_graph(a.graph6), TreePattern(parse_graph6(a.tree)))))


def cmd_contains_all_trees(a):
    ok, missing = contains_all_trees(_graph(a.graph6), a.t)
    out = {"all": ok}
    if missing is not None:
        out["missing"] = encode_graph6(missing.tree)
    _emit(out)


def cmd_anchored_path(a):
    xs = [int(v) for v in a.x.split(",") if v != ""]
    g = _graph(a.graph6)
    for v in xs:
        g.check_vertex(v)
    _emit(_witness_out(contains_anchored_path(g, xs, a.r)))


def cmd_kcore(a):
    g = _graph(a.graph6)
    keep = sorted(peel_vertices(g, a.k))
    _emit({"vertices": keep, "graph6": encode_graph6(g.induced_subgraph(keep))})


def cmd_is_outerplanar(a):
    _emit({"outerplanar": is_outerplanar(_graph(a.graph6), prefilter=not a.no_prefilter, budget=a.budget)})


def cmd_minor(a):
    _emit(_witness_out(find_minor_model(_graph(a.graph6), parse_graph6(a.pattern), a.budget)))


def _ceilings(a):
    ceilings = dict(DEFAULT_CEILINGS)
    for item in a.ceiling or ():
        family, _, value = item.partition("=")
        if family not in ceilings or not value.isdigit():
            raise UsageError(f"bad --ceiling {item!r}; expected family=int with family in {sorted(ceilings)}")
        ceilings[family] = int(value)
    return ceilings


def cmd_enumerate(a):
    spec = EnumerationSpec(
        a.n, connected=a.connected, bipartite=a.bipartite, outerplanar=a.outerplanar, tree=a.tree,
        cycle_free=tuple(a.cycle_free or ()),
        tree_free=tuple(TreePattern(parse_graph6(t)) for t in a.tree_free or ()),
        shard=a.shard,
    )
    ceiling = _ceilings(a)[spec.family()]
    for key, _ in enumerate_keyed(spec, ceiling):
        print(key.decode("ascii"))


def cmd_trees(a):
    for T in enumerate_free_trees(a.t, _ceilings(a)["tree"]):
        print(encode_graph6(T.tree))


def _config(a) -> RunConfig:
    return RunConfig(tolerance=a.tolerance, ceilings=_ceilings(a), workers=a.workers,
                     checkpoint_dir=a.checkpoint_dir, shard=a.shard, output_format=a.format,
                     include_disconnected=a.include_disconnected)


def _write_reports(pairs, fmt, timing):
    if fmt == "tsv":
        print(tsv_header())
        for report, config in pairs:
            print(tsv_row(report_record(report, config, timing)))
        return
    for report, config in pairs:
        _emit(report_record(report, config, timing))
    _emit(summary_record([r for r, _ in pairs]))


def cmd_verify(a):
    config = _config(a)
    params = {}
    for name in PARAMS[a.theorem]:
        value = getattr(a, name)
        if value is None:
            raise UsageError(f"verify {a.theorem} needs --{name}")
        params[name] = value
    plan = build_plan(a.theorem, config, **params)
    t0 = time.perf_counter()
    state = execute(plan, config, resume=a.resume)
    if config.shard is not None:
        _emit(partial_record(plan.theorem, plan.params, config, state))
        return
    report = finalize(plan, state, config)
    report.wall_time = time.perf_counter() - t0
    _write_reports([(report, config)], config.output_format, a.timing)


def cmd_merge(a):
    records = []
    sources = a.files or ["-"]
    for src in sources:
        fh = sys.stdin if src == "-" else open(src)
        try:
            for lineno, line in enumerate(fh, 1):
                if line.strip():
                    try:
                        records.append(json.loads(line))
                    except json.JSONDecodeError as exc:
                        raise UsageError(f"{src}:{lineno}: not a json record ({exc})")
        finally:
            if fh is not sys.stdin:
                fh.close()
    _write_reports(merge_partials(records), a.format, False)


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bipextremal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(name, fn, help):
        s = sub.add_parser(name, help=help)
        s.add_argument("--graph6", required=True, help="graph6/sparse6 string, or - to read stdin")
        s.set_defaults(fn=fn)
        return s

    s = graph_cmd("rho", cmd_rho, "spectral radius")
    s.add_argument("--tolerance", type=float, default=1e-10)
    s.add_argument("--method", choices=("auto", "dense", "power"), default="auto")
    s = graph_cmd("certify", cmd_certify, "rational lower bound plus integer upper bounds")
    s.add_argument("--tolerance", type=float, default=1e-10)
    s.add_argument("--slack", default="1/1000000", help="subtracted from rho, as a fraction")
    s.add_argument("--digits", type=int, default=12)
    s = graph_cmd("contains-cycle", cmd_contains_cycle, "cycle of a given length")
    s.add_argument("--length", type=int, required=True)
    s = graph_cmd("contains-tree", cmd_contains_tree, "tree subgraph")
    s.add_argument("--tree", required=True, help="graph6 of the tree")
    s = graph_cmd("contains-all-trees", cmd_contains_all_trees, "every tree of order t")
    s.add_argument("--t", type=int, required=True)
    s = graph_cmd("anchored-path", cmd_anchored_path, "path on 2r+1 vertices with both ends in X")
    s.add_argument("--x", required=True, help="comma-separated vertices of X")
    s.add_argument("--r", type=int, required=True)
    s = graph_cmd("kcore", cmd_kcore, "peel to minimum degree k+1")
    s.add_argument("--k", type=int, required=True)
    s = graph_cmd("is-outerplanar", cmd_is_outerplanar, "no K4 and no K2,3 minor")
    s.add_argument("--no-prefilter", action="store_true")
    s.add_argument("--budget", type=int, default=DEFAULT_MINOR_BUDGET)
    s = graph_cmd("minor", cmd_minor, "branch sets of a minor")
    s.add_argument("--pattern", required=True, help="graph6 of the pattern (at most 6 vertices)")
    s.add_argument("--budget", type=int, default=DEFAULT_MINOR_BUDGET)

    def ceiling_opt(s):
        s.add_argument("--ceiling", action="append", metavar="FAMILY=N",
                       help="override an enumeration ceiling (tree, outerplanar, bipartite, general)")

    s = sub.add_parser("enumerate", help="one graph6 line per isomorphism class")
    s.add_argument("--n", type=int, required=True)
    for flag in ("connected", "bipartite", "outerplanar", "tree"):
        s.add_argument(f"--{flag}", action="store_true")
    s.add_argument("--cycle-free", type=int, action="append", metavar="L")
    s.add_argument("--tree-free", action="append", metavar="GRAPH6")
    s.add_argument("--shard", type=_shard)
    ceiling_opt(s)
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("trees", help="free trees of order t")
    s.add_argument("--t", type=int, required=True)
    ceiling_opt(s)
    s.set_defaults(fn=cmd_trees)

    s = sub.add_parser("verify", help="run a theorem harness")
    s.add_argument("theorem", choices=THEOREMS)
    for name in ("n", "k", "r", "t", "xmax", "ymax"):
        s.add_argument(f"--{name}", type=int)
    s.add_argument("--tolerance", type=float, default=1e-10)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--shard", type=_shard)
    s.add_argument("--resume", action="store_true")
    s.add_argument("--checkpoint-dir", help=f"defaults to ${CHECKPOINT_ENV}")
    s.add_argument("--format", choices=("json-lines", "tsv"), default="json-lines")
    s.add_argument("--timing", action="store_true", help="include wall time (breaks byte reproducibility)")
    s.add_argument("--include-disconnected", action="store_true")
    ceiling_opt(s)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("merge", help="combine partial records of sharded verify runs")
    s.add_argument("files", nargs="*", help="json-lines files (default stdin)")
    s.add_argument("--format", choices=("json-lines", "tsv"), default="json-lines")
    s.set_defaults(fn=cmd_merge)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.fn(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (ParseError, ValueError, MergeError, ckpt.CheckpointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (BudgetExceeded, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130
    return 0


if __name__ == "__main__":
    sys.exit(main())
