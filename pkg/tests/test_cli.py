"""CLI subcommands: formats, determinism, exit codes."""

import json
import os

import pytest

from corrclust import read_edge_list, read_update_stream
from corrclust.cli import main


def run(args):
    return main(args)


def test_gen_edge_list(tmp_path):
    out = tmp_path / "g.txt"
    assert run(["gen", "--instance", "two_cliques", "--n", "20", "--out", str(out)]) == 0
    with open(out) as fh:
        g = read_edge_list(fh)
    assert g.n == 20
    assert g.m == 2 * 45 + 1


def test_gen_stream(tmp_path):
    out = tmp_path / "s.txt"
    assert run(
        ["gen", "--instance", "er", "--n", "15", "--p", "0.3", "--seed", "4",
         "--stream", "25", "--out", str(out)]
    ) == 0
    with open(out) as fh:
        assert len(read_update_stream(fh)) == 25


def test_static_report_schema_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["static", "--instance", "two_cliques", "--n", "20", "--trials", "60",
            "--seed", "5", "--algorithm", "both"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
    doc = json.loads(a.read_text())
    assert doc["schema"] == 1
    assert set(doc["algorithms"]) == {"pivot", "modified"}
    assert doc["algorithms"]["modified"]["mean_cost"] >= 0


def test_static_parallel_matches_serial(tmp_path):
    a, b = tmp_path / "serial.json", tmp_path / "par.json"
    args = ["static", "--instance", "er", "--n", "25", "--p", "0.4", "--trials", "80",
            "--seed", "3", "--algorithm", "modified"]
    old = os.environ.get("CORRCLUST_THREADS")
    try:
        os.environ["CORRCLUST_THREADS"] = "1"
        assert run(args + ["--out", str(a)]) == 0
        os.environ["CORRCLUST_THREADS"] = "4"
        assert run(args + ["--out", str(b)]) == 0
    finally:
        if old is None:
            os.environ.pop("CORRCLUST_THREADS", None)
        else:
            os.environ["CORRCLUST_THREADS"] = old
    assert a.read_text() == b.read_text()


def test_audit_command(tmp_path):
    out = tmp_path / "audit.json"
    rc = run(["audit", "--instance", "er", "--n", "20", "--p", "0.4", "--seed", "2",
              "--trials", "40", "--classify", "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["dominance_failures"] == 0
    assert doc["min_margin"] >= -1e-9
    assert sum(doc["mistake_counts"].values()) >= 0


def test_width_command(tmp_path):
    out = tmp_path / "w.json"
    assert run(["width", "--instance", "er", "--n", "12", "--p", "0.5", "--seed", "1",
                "--trials", "30", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["max_pair"]["mean"] >= 0
    assert doc["max_pair"]["se"] >= 0


def test_oracle_command(tmp_path):
    out = tmp_path / "o.json"
    assert run(["oracle", "--instance", "bipartite", "--n", "2", "--n2", "3",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["opt_cost"] == 4
    assert doc["packing_lower_bound"] <= 4


def test_dynamic_command_with_verify_and_csv(tmp_path):
    out, csv = tmp_path / "d.json", tmp_path / "d.csv"
    rc = run(["dynamic", "--instance", "er", "--n", "30", "--p", "0.2", "--seed", "6",
              "--updates", "30", "--verify", "--csv", str(csv), "--out", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["mismatches"] == 0 and doc["updates"] == 30
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "step,flip_u,flip_v,affected,micros"
    assert len(lines) == 31
    first = lines[1].split(",")
    assert first[0] == "0" and int(first[3]) >= 0


def test_bench_command(tmp_path):
    out = tmp_path / "bench.json"
    assert run(["bench", "--trials", "25", "--seed", "1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == 1
    drivers = [r["driver"] for r in doc["results"]]
    assert {"static", "audit", "width", "oracle", "dynamic"} <= set(drivers)


def test_two_cliques_requires_even_n():
    with pytest.raises(SystemExit):
        run(["gen", "--instance", "two_cliques", "--n", "9"])


def test_bad_param_range_errors():
    with pytest.raises(ValueError):
        run(["static", "--instance", "er", "--n", "10", "--trials", "5",
             "--epsilon", "0.2"])
