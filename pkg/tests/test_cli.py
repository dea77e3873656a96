import json
import subprocess
import sys

import pytest

from bipextremal import cli
from bipextremal.config import CHECKPOINT_ENV, SCHEMA_VERSION
from bipextremal.formats import encode_graph6
from bipextremal.graph import complete_bipartite, cycle_graph, star_graph

K24 = encode_graph6(complete_bipartite(2, 4))
C6 = encode_graph6(cycle_graph(6))


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_rho(capsys):
    code, out, _ = run(capsys, "rho", "--graph6", K24)
    assert code == 0 and out.strip() == "2.82842712474619"


def test_rho_from_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "rho", "--graph6", "-", stdin=C6 + "\n", monkeypatch=monkeypatch)
    assert code == 0 and float(out) == pytest.approx(2.0)


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--graph6", K24)
    [rec] = records(out)
    assert rec["lower_verified"] and rec["upper_local"] >= 8 and rec["gamma"] >= 8


def test_detector_commands(capsys):
    assert records(run(capsys, "contains-cycle", "--graph6", C6, "--length", "6")[1])[0]["found"]
    assert not records(run(capsys, "contains-cycle", "--graph6", C6, "--length", "4")[1])[0]["found"]
    path4 = encode_graph6(complete_bipartite(1, 1))
    assert records(run(capsys, "contains-tree", "--graph6", C6, "--tree", path4)[1])[0]["found"]
    rec = records(run(capsys, "contains-all-trees", "--graph6", C6, "--t", "4")[1])[0]
    assert rec["all"] is False and "missing" in rec
    rec = records(run(capsys, "anchored-path", "--graph6", K24, "--x", "2,3,4,5", "--r", "2")[1])[0]
    assert rec["found"]
    rec = records(run(capsys, "kcore", "--graph6", encode_graph6(star_graph(4)), "--k", "2")[1])[0]
    assert rec["vertices"] == []
    assert records(run(capsys, "is-outerplanar", "--graph6", C6)[1])[0] == {"outerplanar": True}
    k23 = encode_graph6(complete_bipartite(2, 3))
    rec = records(run(capsys, "minor", "--graph6", k23, "--pattern", k23)[1])[0]
    assert rec["found"] and len(rec["branch_sets"]) == 5


def test_enumerate_and_trees(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "4", "--connected", "--bipartite")
    assert code == 0 and len(out.split()) == 3
    code, out, _ = run(capsys, "enumerate", "--n", "5", "--connected", "--cycle-free", "3")
    assert len(out.split()) == 6  # OEIS A024607
    code, out, _ = run(capsys, "trees", "--t", "7")
    assert len(out.split()) == 11


def test_enumerate_shards_partition(capsys):
    whole = set(run(capsys, "enumerate", "--n", "6", "--connected")[1].split())
    parts = [set(run(capsys, "enumerate", "--n", "6", "--connected", "--shard", f"{i}/3")[1].split())
             for i in range(3)]
    assert set().union(*parts) == whole and sum(map(len, parts)) == len(whole) == 112


def test_verify_json_lines(capsys):
    code, out, _ = run(capsys, "verify", "cycle", "--n", "6", "--k", "1")
    recs = records(out)
    assert code == 0
    assert all(r["schema_version"] == SCHEMA_VERSION for r in recs)
    assert recs[0]["kind"] == "report" and recs[0]["status"] == "holds"
    assert recs[0]["tolerance"] == 1e-10 and "wall_time" not in recs[0]
    assert recs[-1]["kind"] == "summary" and recs[-1]["statuses"] == {"holds": 1}


def test_verify_timing_and_tsv(capsys):
    recs = records(run(capsys, "verify", "cycle", "--n", "6", "--k", "1", "--timing")[1])
    assert recs[0]["wall_time"] >= 0
    code, out, _ = run(capsys, "verify", "path-lemma", "--xmax", "3", "--ymax", "3", "--r", "2", "--format", "tsv")
    header, row = out.splitlines()
    assert header.split("\t")[0] == "theorem"
    assert row.split("\t")[2] == "holds"


@pytest.mark.parametrize("m", [2, 4])
def test_sharded_verify_merges_byte_identical(capsys, tmp_path, m):
    argv = ["verify", "cycle", "--n", "8", "--k", "2"]
    _, whole, _ = run(capsys, *argv)
    files = []
    for i in range(m):
        code, out, _ = run(capsys, *argv, "--shard", f"{i}/{m}")
        assert code == 0 and records(out)[0]["kind"] == "partial"
        f = tmp_path / f"part{i}.jsonl"
        f.write_text(out)
        files.append(str(f))
    code, merged, _ = run(capsys, "merge", *reversed(files))
    assert code == 0 and merged == whole


def test_merge_errors(capsys, tmp_path):
    _, part, _ = run(capsys, "verify", "cycle", "--n", "6", "--k", "1", "--shard", "0/2")
    f = tmp_path / "p.jsonl"
    f.write_text(part)
    assert run(capsys, "merge", str(f))[0] == 1
    f.write_text("not json\n")
    assert run(capsys, "merge", str(f))[0] == 1
    assert run(capsys, "merge", str(tmp_path / "missing.jsonl"))[0] == 1


def test_checkpoint_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(CHECKPOINT_ENV, str(tmp_path))
    calls = []

    def stop(done):
        calls.append(done)
        if done == 50:
            raise KeyboardInterrupt

    real = cli.execute
    monkeypatch.setattr(cli, "execute", lambda plan, config, resume=False: real(plan, config, resume=resume, progress=stop))
    code, _, err = run(capsys, "verify", "cycle", "--n", "9", "--k", "2")
    assert code == 130 and "interrupted" in err
    assert list(tmp_path.glob("run-*.json"))
    monkeypatch.setattr(cli, "execute", real)
    code, resumed, _ = run(capsys, "verify", "cycle", "--n", "9", "--k", "2", "--resume")
    assert code == 0 and not list(tmp_path.glob("run-*.json"))
    monkeypatch.delenv(CHECKPOINT_ENV)
    assert run(capsys, "verify", "cycle", "--n", "9", "--k", "2")[1] == resumed


def test_changed_tolerance_checkpoint_is_exit_1(capsys, tmp_path, monkeypatch):
    real = cli.execute

    def interrupted(plan, config, resume=False):
        def stop(done):
            if done == 20:
                raise KeyboardInterrupt
        return real(plan, config, resume=resume, progress=stop)

    monkeypatch.setattr(cli, "execute", interrupted)
    argv = ["verify", "cycle", "--n", "9", "--k", "2", "--checkpoint-dir", str(tmp_path)]
    assert run(capsys, *argv)[0] == 130
    monkeypatch.setattr(cli, "execute", real)
    code, _, err = run(capsys, *argv, "--tolerance", "1e-8", "--resume")
    assert code == 1 and "different configuration" in err


@pytest.mark.parametrize("argv,code", [
    ([], 1),
    (["bogus"], 1),
    (["verify", "cycle", "--n", "6"], 1),
    (["verify", "cycle", "--n", "6", "--k", "1", "--shard", "3/2"], 1),
    (["verify", "cycle", "--n", "6", "--k", "1", "--tolerance", "0"], 1),
    (["rho", "--graph6", ""], 1),
    (["rho", "--graph6", "\x7f\x7f"], 1),
    (["contains-cycle", "--graph6", C6, "--length", "2"], 1),
    (["anchored-path", "--graph6", C6, "--x", "0,9", "--r", "2"], 1),
    (["enumerate", "--n", "9"], 2),
    (["enumerate", "--n", "6", "--ceiling", "general=5"], 2),
    (["enumerate", "--n", "6", "--ceiling", "bogus=5"], 1),
    (["minor", "--graph6", encode_graph6(complete_bipartite(4, 4)), "--pattern",
      encode_graph6(complete_bipartite(2, 3)), "--budget", "1"], 2),
    (["verify", "cycle", "--n", "12", "--k", "1"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_console_script_runs():
    out = subprocess.run([sys.executable, "-m", "bipextremal.cli", "rho", "--graph6", K24],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "2.82842712474619"
