import csv
import json
import subprocess
import sys

import pytest

from subuniversal import cli, grammars, machines
from subuniversal.distributions import load


def run(*argv):
    return cli.main([str(a) for a in argv])


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def test_fsa_dist_and_pairs(tmp_path):
    out, pairs = tmp_path / "fsa.csv", tmp_path / "result-experiment-distribution.csv"
    assert run("fsa-dist", "--n", 12, "--out", out, "--pairs-out", pairs) == 0
    d = load(out)
    assert d.meta["total"] == 44 and d.ranked()[0] == ""
    assert {"config_hash", "tool_version", "conventions"} <= set(d.meta)
    got = rows(pairs)
    assert list(got[0]) == ["string", "valid-encoding", "sigma", "string-p", "num-states",
                            "output", "output-complexity"]
    assert len(got) == 44
    assert all(r["string"] == r["sigma"] + r["string-p"] for r in got)


def test_fsa_complexity_export(tmp_path):
    out = tmp_path / "result-complexity.csv"
    assert run("fsa-complexity", "--max-string-len", 4, "--out", out) == 0
    got = rows(out)
    assert list(got[0]) == ["s", "complexity", "sigma", "string-p"]
    assert len(got) == 31
    assert got[0]["s"] == "eps" and got[0]["complexity"] == "8"
    assert all(int(r["complexity"]) <= len(r["s"].replace("eps", "")) + 12 for r in got)


def test_grammar_csv_roundtrip(tmp_path):
    out = tmp_path / "grammars.csv"
    assert run("cfg-gen", "--limit", 300, "--out", out) == 0
    header = out.read_text().splitlines()[0]
    assert header == "grammar_id,c,lhs,rhs"
    assert cli.read_grammars(out) == grammars.enumerate_grammars(300)


def test_cfg_dist(tmp_path):
    g = tmp_path / "g.csv"
    s = tmp_path / "s.txt"
    s.write_text("0\n01\n000\n001\n")
    run("cfg-gen", "--limit", 200, "--out", g)
    out = tmp_path / "cfg.csv"
    assert run("cfg-dist", "--grammars", g, "--strings", s, "--out", out) == 0
    d = load(out)
    assert d.meta["total"] == 200
    ref = grammars.cfg_distribution(grammars.enumerate_grammars(200), ["0", "01", "000", "001"])
    assert dict(d.counts) == dict(ref.counts)
    # a distribution file is accepted as the string set too
    out2 = tmp_path / "cfg2.csv"
    assert run("cfg-dist", "--limit", 200, "--strings", out, "--out", out2) == 0
    assert dict(load(out2).counts) == dict(ref.counts)


def test_tm_dist_worker_count_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("tm-dist", "--states", 3, "--method", "index", "--jobs", 1, "--out", a) == 0
    assert run("tm-dist", "--states", 3, "--method", "index", "--jobs", 8, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert run("--jobs", 8, "tm-dist", "--states", 3, "--out", c) == 0
    assert load(c).counts == load(a).counts


def test_resume_matches_uninterrupted(tmp_path):
    ck = tmp_path / "ck"
    with pytest.raises(KeyboardInterrupt):
        machines.ctm_census(3, 21, (0, 1), method="index", checkpoint=ck, stop_after=29)
    half = len(list(ck.glob("unit-*.json")))
    assert half == 29
    resumed, fresh = tmp_path / "r.csv", tmp_path / "f.csv"
    assert run("tm-dist", "--states", 3, "--method", "index", "--checkpoint", ck, "--out", resumed) == 0
    assert run("tm-dist", "--states", 3, "--method", "index", "--out", fresh) == 0
    assert resumed.read_bytes() == fresh.read_bytes()


def test_corrupt_checkpoint_refused(tmp_path, capsys):
    ck = tmp_path / "ck"
    run("tm-dist", "--states", 2, "--method", "index", "--checkpoint", ck, "--out", tmp_path / "x.csv")
    unit = next(ck.glob("unit-*.json"))
    unit.write_text("garbage")
    assert run("tm-dist", "--states", 2, "--method", "index", "--checkpoint", ck) == 2
    assert "corrupt checkpoint" in capsys.readouterr().err


def test_tm_dist_json_and_sampling(tmp_path):
    out = tmp_path / "s.json"
    assert run("tm-dist", "--states", 3, "--sample", 5000, "--seed", 3, "--format", "json",
               "--out", out) == 0
    obj = json.loads(out.read_text())
    assert obj["meta"]["params"]["sample"] == 5000 and obj["meta"]["total"] == 10_000


def test_other_models(tmp_path):
    assert run("tm-nonhalting", "--states", 2, "--steps", 6, "--out", tmp_path / "nh.csv") == 0
    assert load(tmp_path / "nh.csv").meta["total"] == 8192
    a, b = tmp_path / "ca1.csv", tmp_path / "ca8.csv"
    assert run("ca-dist", "--family", "elementary", "--steps", 12, "--out", a) == 0
    assert run("ca-dist", "--family", "elementary", "--steps", 12, "--jobs", 8, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_analysis_commands(tmp_path):
    tm3, tm2, ap = tmp_path / "tm3.csv", tmp_path / "tm2.csv", tmp_path / "fsa.csv"
    run("tm-dist", "--states", 3, "--out", tm3)
    run("tm-dist", "--states", 2, "--out", tm2)
    run("fsa-dist", "--n", 16, "--ap", "--out", ap)
    cons = tmp_path / "tm3c.csv"
    assert run("consolidate", tm3, "--out", cons) == 0
    assert load(cons).meta["consolidated"]
    m = tmp_path / "matrix.csv"
    assert run("compare", "--ref", tm3, "--dists", tm2, ap, "--method", "kendall", "--out", m) == 0
    got = rows(m)
    assert [r["kendall"] for r in got] == ["tm3", "tm2", "fsa"]
    assert float(got[0]["tm3"]) == 1.0
    mj = tmp_path / "matrix.json"
    assert run("compare", "--ref", tm3, "--dists", ap, "--format", "json", "--out", mj) == 0
    assert set(json.loads(mj.read_text())["tm3"]["fsa"]) == {"kendall", "spearman", "pearson", "shared"}
    missed = tmp_path / "missed.csv"
    assert run("missed", "--weak", ap, "--strong", tm3, "-k", 7, "--out", missed) == 0
    assert len(rows(missed)) == 7
    base = tmp_path / "base.csv"
    assert run("baselines", "--strings", tm3, "--ref", tm3, "--out", base) == 0
    assert list(rows(base)[0]) == ["string", "entropy", "lzw_bits"]


def test_table1_and_convergence_fast_tier(tmp_path):
    t1 = tmp_path / "table1.csv"
    assert run("table1", "--states", 3, "--grammars", 300, "--fsa-max", 16, "--out", t1) == 0
    got = rows(t1)
    assert [r["model"] for r in got] == ["FSA(8-16)", "FSA/AP(8-16)", "CFG(300)", "LBA(6)",
                                         "LBA(13)", "LBA 21 = TM(3,2)"]
    lba = [int(r["strings"]) for r in got[3:]]
    assert lba == sorted(lba)
    conv = tmp_path / "conv.csv"
    assert run("convergence", "--states", 3, "--out", conv) == 0
    c = rows(conv)
    assert [r["cutoff"] for r in c] == ["6", "13", "21"] and float(c[-1]["kendall"]) == 1.0


def test_errors_exit_nonzero(tmp_path, capsys):
    assert run("tm-dist", "--states", 9) == 2
    assert run("missed", "--weak", tmp_path / "nope.csv", "--strong", tmp_path / "nope.csv") == 2
    with pytest.raises(SystemExit) as exc:
        run("tm-dist", "--states", 2, "--blanks", "2")
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        run("no-such-command")


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "subuniversal.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "subuniversal" in res.stdout
