import io
import json
import subprocess
import sys

import pytest

from gue_index.cli import build_parser, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_variance_text():
    code, out, _ = call("variance", "--n", "2", "--method", "sum")
    assert code == 0
    assert "1/2 - 1/π" in out


def test_variance_all_methods_json():
    code, out, _ = call("variance", "--n", "8", "--format", "json", "--digits", "30")
    recs = json.loads(out)
    assert code == 0
    assert [r["method"] for r in recs] == ["sum", "voisum", "tau", "recurrence", "closed", "asymptotic"]
    exact = {(r["rat"], r["inv_pi"]) for r in recs if r["rat"] is not None}
    assert len(exact) == 1


def test_json_is_byte_identical():
    a = call("variance", "--n", "20", "--format", "json")[1]
    b = call("variance", "--n", "20", "--format", "json")[1]
    assert a == b


def test_variance_csv():
    code, out, _ = call("variance", "--n", "6", "--method", "voisum", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "n,a,b,decimal,method"
    assert lines[1].startswith("6,3/2,-1249/320,")


def test_variance_small_n_skips_numeric_routes():
    code, out, _ = call("variance", "--n", "1")
    assert code == 0 and "closed" not in out


def test_explicit_method_out_of_range_is_usage_error():
    code, _, err = call("variance", "--n", "1", "--method", "closed")
    assert code == 2 and "closed form" in err


@pytest.mark.parametrize("argv", [
    ["variance", "--n", "-3"],
    ["variance", "--n", "2", "--digits", "5"],
    ["mc", "--n", "2", "--samples", "10"],
    ["verify", "--max-n", "1"],
    ["integrals", "--m", "0"],
    ["mc", "--n", "2", "--workers", "0"],
    ["variance"],
    ["bogus"],
])
def test_usage_errors(argv):
    code, _, _ = call(*argv)
    assert code == 2


def test_dist_and_tau():
    code, out, _ = call("dist", "--n", "2", "--format", "json")
    probs = json.loads(out)["probs"]
    assert code == 0 and len(probs) == 3
    code, out, _ = call("tau", "--n", "3", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 5


def test_mc_json():
    code, out, _ = call("mc", "--n", "4", "--samples", "20000", "--seed", "9", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["samples"] == 20000 and sum(rec["counts"]) == 20000
    assert abs(rec["z_score"]) < 6
    assert rec["p_value"] is not None


def test_verify_small_passes(tmp_path):
    target = tmp_path / "report.json"
    code, out, err = call("verify", "--max-n", "4", "--no-numeric", "--format", "json", "--out", str(target))
    assert code == 0 and out == "" and err == ""
    body = json.loads(target.read_text())
    assert body["ok"] and all(c["ok"] for c in body["checks"])


def test_verify_failure_exit_code(monkeypatch):
    import gue_index.cli as cli
    from gue_index.report import Report

    def broken(*args, **kwargs):
        rep = Report()
        rep.add("deliberately_broken", 3, False, "residual 1")
        return rep

    monkeypatch.setattr(cli, "run_suite", broken)
    code, out, err = call("verify", "--max-n", "3")
    assert code == 1
    assert "FAIL deliberately_broken [n=3]" in err


def test_integrals_m1():
    code, out, _ = call("integrals", "--m", "1", "--digits", "30", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["ok"]


def test_parser_lists_commands():
    help_text = build_parser().format_help()
    for cmd in ("variance", "dist", "tau", "verify", "mc", "integrals"):
        assert cmd in help_text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gue_index", "variance", "--n", "3", "--method", "sum"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "3/4 - 3/(2·π)" in proc.stdout
