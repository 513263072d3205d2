import json
import subprocess
import sys

import pytest

from lgcy import cli
from lgcy.cli import EXIT_CHECK_FAILED, EXIT_NOT_ISOLATED, EXIT_OK, EXIT_USAGE, main
from lgcy.report import Check, parse_json

CUBIC = "x1^3+x2^3+x3^3"
QUARTIC = "x1^4+x2^4+x3^4+x4^4"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def test_verify_cubic(capsys):
    code, d, _ = run_json(capsys, "verify", "--poly", CUBIC, "--n", "3")
    assert code == EXIT_OK
    assert all(c["verdict"] == "pass" for c in d["checks"])
    names = {c["name"] for c in d["checks"]}
    assert {"isolated_certificate", "milnor_number_formula", "frobenius_associativity", "phi_ring_isomorphism"} <= names
    assert d["input"] == {
        "poly": "x1^3 + x2^3 + x3^3",
        "n": 3,
        "command": "verify",
        "max_weight": 3,
        "config": {"c": {}, "trace_scale": "1"},
    }
    assert d["certificates"]["milnor"]["milnor_number"] == 8
    assert [e["dim"] for e in d["tables"]["hypersurface_H"]["entries"]] == [1, 2, 1]
    assert set(d["timings_ms"]) >= {"parse", "certificate", "hilbert", "frobenius", "total"}


def test_schema_top_level(capsys):
    _, d, _ = run_json(capsys, "hilbert", "--poly", CUBIC, "--n", "3")
    for key in ("version", "input", "certificates", "tables", "frobenius", "checks", "timings_ms"):
        assert key in d
    assert isinstance(d["input"]["poly"], str) and d["input"]["n"] == 3


def test_not_isolated_names_degree(capsys):
    code, d, err = run_json(capsys, "verify", "--poly", "x1^3", "--n", "3")
    assert code == EXIT_NOT_ISOLATED
    cert = d["certificates"]["isolated"]
    assert cert["isolated"] is False and cert["failing_degree"] == 4
    assert "4" in err


def test_hilbert_two_variable_cubic_csv(capsys):
    code, out, _ = run(capsys, "hilbert", "--poly", "x1^3+x2^3", "--n", "3", "--format", "csv")
    assert code == EXIT_NOT_ISOLATED


def test_hesse_singular_rejected(capsys):
    code, _, _ = run(capsys, "verify", "--poly", "x1^3+x2^3+x3^3-3*x1*x2*x3", "--n", "3")
    assert code == EXIT_NOT_ISOLATED


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--poly", "x1^2 -", "--n", "3"],
        ["verify", "--poly", "x1^2+x2^2", "--n", "2"],
        ["verify", "--poly", "x1^2+x2^2+x3^2", "--n", "3"],
        ["frobenius", "--poly", CUBIC, "--n", "3", "--c", "1=0"],
        ["frobenius", "--poly", CUBIC, "--n", "3", "--c", "0=1"],
        ["frobenius", "--poly", CUBIC, "--n", "3", "--c", "nonsense"],
        ["frobenius", "--poly", CUBIC, "--n", "3", "--trace-scale", "0"],
        ["verify", "--poly", CUBIC, "--n", "3", "--max-weight", "0"],
        ["verify", "--poly", CUBIC, "--n", "3", "--threads", "0"],
        ["verify", "--poly", CUBIC, "--n", "3", "--poly-file", "x"],
        ["verify", "--n", "3"],
        ["verify", "--poly", CUBIC],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_parse_error_reports_offset(capsys):
    _, _, err = run(capsys, "verify", "--poly", "x1^2 -", "--n", "3")
    assert "parse error" in err and "5" in err


def test_cell_budget_exit(capsys):
    code, _, err = run(capsys, "koszul", "--poly", CUBIC, "--n", "3", "--cell-budget", "50")
    assert code == EXIT_USAGE
    assert "--cell-budget" in err


def test_check_failure_exit(capsys, monkeypatch):
    real = cli.frobenius_checks

    def broken(A, threads=1):
        return real(A, threads) + [Check.of("injected", False)]

    monkeypatch.setattr(cli, "frobenius_checks", broken)
    code, d, _ = run_json(capsys, "frobenius", "--poly", CUBIC, "--n", "3")
    assert code == EXIT_CHECK_FAILED
    assert [c["name"] for c in d["checks"] if c["verdict"] == "fail"] == ["injected"]


def test_each_command_runs(capsys):
    for cmd in ("hilbert", "koszul", "cohomology", "frobenius", "compare", "verify"):
        code, d, _ = run_json(capsys, cmd, "--poly", CUBIC, "--n", "3")
        assert code == EXIT_OK, cmd
        assert d["input"]["command"] == cmd


def test_compare_flags(capsys):
    code, d, _ = run_json(capsys, "compare", "--poly", QUARTIC, "--n", "4", "--base-c", "0=2", "--c", "0=1")
    assert code == EXIT_OK
    cmp = d["frobenius"]["comparison"]
    assert cmp["flag"] == "requires quadratic extension" and cmp["discriminant"] == 2
    code, d, _ = run_json(capsys, "compare", "--poly", CUBIC, "--n", "3", "--trace-scale", "2")
    assert d["frobenius"]["comparison"]["c_phi"] == "2"


def test_csv_out_directory(capsys, tmp_path):
    out = tmp_path / "tables"
    code, stdout, _ = run(capsys, "cohomology", "--poly", CUBIC, "--n", "3", "--format", "csv", "--out", str(out))
    assert code == EXIT_OK and stdout == ""
    files = sorted(p.name for p in out.iterdir())
    assert "hypersurface_H.csv" in files and "e2_page.csv" in files
    assert (out / "hypersurface_H.csv").read_bytes() == b"r,dim\n0,1\n1,2\n2,1\n"


def test_json_out_file_round_trip(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--poly", CUBIC, "--n", "3", "--out", str(out)]) == EXIT_OK
    rep = parse_json(out.read_bytes())
    assert rep.passed and rep.input["n"] == 3


def test_pretty_output(capsys):
    code, out, _ = run(capsys, "cohomology", "--poly", QUARTIC, "--n", "4", "--format", "pretty")
    assert code == EXIT_OK
    assert "R(W)_0 ⊕ C" in out
    assert "PASS" in out


def test_poly_file(capsys, tmp_path):
    p = tmp_path / "f.txt"
    p.write_text(CUBIC + "\n")
    code, d, _ = run_json(capsys, "hilbert", "--poly-file", str(p), "--n", "3")
    assert code == EXIT_OK and d["certificates"]["milnor"]["milnor_number"] == 8
    code, _, _ = run(capsys, "hilbert", "--poly-file", str(tmp_path / "missing"), "--n", "3")
    assert code == EXIT_USAGE


def test_deterministic_bodies(capsys):
    bodies = []
    for threads in ("1", "2"):
        _, d, _ = run_json(capsys, "verify", "--poly", QUARTIC, "--n", "4", "--threads", threads)
        d.pop("timings_ms")
        bodies.append(json.dumps(d, sort_keys=True))
    assert bodies[0] == bodies[1]


# batch


def write_manifest(tmp_path, data):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_batch_two_pass_entries(capsys, tmp_path):
    m = write_manifest(tmp_path, [{"poly": CUBIC, "n": 3}, {"poly": QUARTIC, "n": 4, "command": "cohomology"}])
    code, d, _ = run_json(capsys, "batch", m, "--threads", "2")
    assert code == EXIT_OK
    assert [c["verdict"] for c in d["checks"]] == ["pass", "pass"]
    assert [e["exit_code"] for e in d["entries"]] == [0, 0]
    assert "entry1.hypersurface_H" in d["tables"]


def test_batch_non_isolated_entry(capsys, tmp_path):
    m = write_manifest(tmp_path, {"entries": [{"poly": CUBIC, "n": 3}, {"poly": "x1^3", "n": 3}]})
    code, d, _ = run_json(capsys, "batch", m)
    assert code == EXIT_CHECK_FAILED
    assert [c["verdict"] for c in d["checks"]] == ["pass", "fail"]
    assert d["entries"][1]["exit_code"] == EXIT_NOT_ISOLATED


def test_batch_bad_entry_does_not_abort(capsys, tmp_path):
    m = write_manifest(tmp_path, [{"poly": "x1^", "n": 3}, {"poly": CUBIC, "n": 3, "command": "hilbert"}])
    code, d, _ = run_json(capsys, "batch", m)
    assert code == EXIT_CHECK_FAILED
    assert d["entries"][0]["exit_code"] == EXIT_USAGE and "error" in d["entries"][0]
    assert d["entries"][1]["exit_code"] == EXIT_OK


def test_batch_empty(capsys, tmp_path):
    code, d, _ = run_json(capsys, "batch", write_manifest(tmp_path, []))
    assert code == EXIT_OK and d["checks"] == [] and d["input"]["entries"] == 0


def test_batch_unreadable(capsys, tmp_path):
    code, _, err = run(capsys, "batch", str(tmp_path / "nope.json"))
    assert code == EXIT_USAGE and "manifest" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["batch", str(bad)]) == EXIT_USAGE


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "lgcy", "hilbert", "--poly", CUBIC, "--n", "3", "--format", "pretty"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and "[hilbert]" in out.stdout
