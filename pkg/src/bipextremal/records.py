"""Report records: json-lines (the default) and tsv.

Floats are written with 15 significant digits. Wall time is left out unless
asked for, which keeps reports byte-for-byte reproducible.
"""

from __future__ import annotations

import json
from collections import Counter

from .config import SCHEMA_VERSION, RunConfig
from .verify import TheoremReport, finalize, merge_states, build_plan


def num(x):
    """Round floats (also inside containers) to 15 significant digits."""
    if isinstance(x, float):
        return float(f"{x:.15g}")
    if isinstance(x, dict):
        return {k: num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [num(v) for v in x]
    return x


def report_record(report: TheoremReport, config: RunConfig, timing: bool = False) -> dict:
    rec = {
        "schema_version": SCHEMA_VERSION,
        "kind": "report",
        "theorem": report.theorem,
        "params": report.params,
        "status": report.status,
        "population": report.population,
        "threshold": report.threshold,
        "maximizers": [{"graph6": g6, "rho": rho} for g6, rho in report.maximizers],
        "margin": report.margin,
        "unique": report.unique,
        "counterexamples": [{"graph6": g6, "structure": s} for g6, s in report.counterexamples],
        "details": report.details,
        "tolerance": config.tolerance,
    }
    if timing:
        rec["wall_time"] = report.wall_time
    return num(rec)


def summary_record(reports) -> dict:
    statuses = Counter(r.status for r in reports)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "summary",
        "reports": len(reports),
        "population": sum(r.population for r in reports),
        "statuses": dict(sorted(statuses.items())),
    }


def partial_record(theorem: str, params: dict, config: RunConfig, state: dict) -> dict:
    """Aggregate of one shard; exact floats so merging loses nothing."""
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "partial",
        "theorem": theorem,
        "params": params,
        "shard": list(config.shard),
        "tolerance": config.tolerance,
        "include_disconnected": config.include_disconnected,
        "ceilings": config.ceilings,
        "state": state,
    }


def dumps(rec: dict) -> str:
    return json.dumps(rec, separators=(",", ":"))


TSV_COLUMNS = ("theorem", "params", "status", "population", "threshold", "maximizers", "margin",
               "unique", "counterexamples")


def tsv_header() -> str:
    return "\t".join(TSV_COLUMNS)


def tsv_row(rec: dict) -> str:
    params = ";".join(f"{k}={v}" for k, v in rec["params"].items())
    maxi = ",".join(f"{m['graph6']}:{m['rho']!r}" for m in rec["maximizers"])
    cex = ",".join(f"{c['graph6']}:{c['structure']}" for c in rec["counterexamples"])
    cells = [rec["theorem"], params, rec["status"], rec["population"], rec["threshold"], maxi,
             rec["margin"], rec["unique"], cex]
    return "\t".join("" if c is None else str(c) for c in cells)


class MergeError(ValueError):
    pass


def merge_partials(records) -> list[tuple[TheoremReport, RunConfig]]:
    """Finalise shard aggregates into reports, one per (theorem, params).

    Every group must contain each shard 0..m-1 exactly once and agree on
    the run configuration. Groups keep their first-seen order.
    """
    groups = {}
    for rec in records:
        if rec.get("schema_version") != SCHEMA_VERSION or rec.get("kind") != "partial":
            raise MergeError("merge expects partial records from sharded verify runs")
        ident = json.dumps([rec["theorem"], rec["params"]], sort_keys=True)
        groups.setdefault(ident, []).append(rec)
    out = []
    for recs in groups.values():
        m = recs[0]["shard"][1]
        conf = {(r["tolerance"], r["include_disconnected"], json.dumps(r["ceilings"], sort_keys=True)) for r in recs}
        if len(conf) != 1:
            raise MergeError(f"shards of {recs[0]['theorem']} were run with different settings")
        shards = sorted(r["shard"][0] for r in recs)
        if any(r["shard"][1] != m for r in recs) or shards != list(range(m)):
            raise MergeError(f"{recs[0]['theorem']} {recs[0]['params']}: need shards 0..{m - 1} exactly once")
        recs.sort(key=lambda r: r["shard"][0])
        state = recs[0]["state"]
        for r in recs[1:]:
            state = merge_states(state, r["state"])
        first = recs[0]
        config = RunConfig(tolerance=first["tolerance"], include_disconnected=first["include_disconnected"],
                           ceilings=first["ceilings"])
        plan = build_plan(first["theorem"], config, **first["params"])
        out.append((finalize(plan, state, config), config))
    return out
