import io
import json

import pytest

from icbdd.cli import run, sci

TRI = "s u 0.5\ns t 0.5\nu t 0.5\n"


@pytest.fixture
def tri_file(tmp_path):
    path = tmp_path / "triangle.txt"
    path.write_text(TRI)
    return str(path)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_spread(tri_file):
    code, out, _ = call("spread", tri_file, "--seeds", "s", "--prob", "0.5")
    assert code == 0
    doc = json.loads(out)
    assert doc["sigma"] == pytest.approx(2.125)
    assert doc["per_target"] == pytest.approx({"s": 1.0, "u": 0.5, "t": 0.625})


def test_spread_csv(tri_file):
    code, out, _ = call("spread", tri_file, "--seeds", "s", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "target,probability"
    assert "t,0.625" in out.splitlines()


def test_stats(tri_file):
    code, out, _ = call("stats", tri_file, "--pairs", "--no-timing")
    assert code == 0
    doc = json.loads(out)
    pair = next(p for p in doc["pairs"] if (p["s"], p["t"]) == ("s", "t"))
    assert pair["cardinality"] == "5"
    assert doc["summary"]["shared_size"] <= doc["summary"]["sum_size"]
    assert "time_ms" not in doc["summary"]


def test_stats_cardinality_independent_of_order(tri_file, tmp_path):
    runs = [json.loads(call("stats", tri_file, "--pairs", "--no-timing", "--order-seed", str(k))[1])
            for k in (0, 1, 2)]
    cards = [[p["cardinality"] for p in r["pairs"]] for r in runs]
    assert cards[0] == cards[1] == cards[2]


def test_sample_deterministic(tri_file):
    argv = ("sample", tri_file, "--seeds", "s", "--target", "t", "--count", "3", "--rng-seed", "7")
    first, second = call(*argv), call(*argv)
    assert first[0] == 0
    assert first[1] == second[1]
    assert len(json.loads(first[1])["samples"]) == 3


def test_conditional(tri_file):
    code, out, _ = call("conditional", tri_file, "--seeds", "s", "--positives", "u")
    assert code == 0
    assert json.loads(out)["per_target"]["t"] == pytest.approx(0.75)


def test_gradient(tri_file):
    code, out, _ = call("gradient", tri_file, "--seeds", "s", "--target", "t")
    assert code == 0
    assert json.loads(out)["gradients"]["s->t"] == pytest.approx(0.75)


def test_maximize(tri_file):
    code, out, _ = call("maximize", tri_file, "--k", "2", "--no-timing", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "step,vertex,sigma,marginal,shared_size"
    assert lines[1].startswith("1,s,2.125")


def test_compare(tri_file):
    code, out, _ = call("compare", tri_file, "--seeds", "s", "--samples", "1,1000")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [r["N"] for r in rows] == [1, 1000]
    assert rows[0]["stderr"] is None
    assert rows[1]["exact"] == pytest.approx(2.125)


def test_order_roundtrip(tri_file, tmp_path):
    path = str(tmp_path / "order.txt")
    code, out, _ = call("order", tri_file, "--order-file", path)
    assert code == 0
    assert json.loads(out)["width"] == 2
    code, out, _ = call("spread", tri_file, "--seeds", "s", "--order-file", path)
    assert code == 0 and json.loads(out)["sigma"] == pytest.approx(2.125)


def test_prune_flags_agree(tri_file):
    outs = {call("spread", tri_file, "--seeds", "u", *flags)[1]
            for flags in ((), ("--no-prune",), ("--prune-weak",))}
    assert len(outs) == 1


def test_usage_errors(tri_file, tmp_path):
    assert call("spread", tri_file)[0] == 1                              # missing --seeds
    assert call("spread", tri_file, "--seeds", "zz")[0] == 1             # unknown label
    assert call("bogus", tri_file)[0] == 1
    assert call("spread", str(tmp_path / "missing"), "--seeds", "s")[0] == 1
    assert call("conditional", tri_file, "--seeds", "s", "--positives", "u",
                "--negatives", "u")[0] == 1
    assert call("stats", tri_file, "--no-prune", "--prune-weak")[0] == 1
    assert call("spread", tri_file, "--seeds", "s", "--prob", "2")[0] == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("a b 1.5\n")
    code, _, err = call("spread", str(bad), "--seeds", "a")
    assert code == 1 and "probability out of range" in err


def test_resource_limit(tri_file):
    code, _, err = call("stats", tri_file, "--node-limit", "1", "--no-prune")
    assert code == 2
    assert "resource limit" in err
    code, out, _ = call("maximize", tri_file, "--k", "1", "--node-limit", "1", "--no-prune")
    assert code == 2
    assert "error" in json.loads(out)


def test_sci():
    assert sci(22_000_000) == "2.2e+07"
    assert sci(0) == "0.0e+00"
    assert sci(64 * 10 ** 45) == "6.4e+46"
