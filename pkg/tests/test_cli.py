import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from modhadamard import cli

RECIPE_SCHEMA = json.loads(
    resources.files("modhadamard.data").joinpath("recipe.schema.json").read_text()
)
VERDICT_SCHEMA = json.loads(
    resources.files("modhadamard.data").joinpath("verdict.schema.json").read_text()
)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_decide_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "decide", "57", "7")
    assert code == 0
    assert "Exists" in out
    code, out, _ = run_cli(capsys, "decide", "13", "7")
    assert code == 1
    assert "QuadNonResidue" in out
    code, out, _ = run_cli(capsys, "decide", "29", "7")
    assert code == 2
    assert "n = 1 (mod 14) but n < 43" in out


def test_decide_json_validates(capsys):
    for n, m in [(57, 7), (13, 7), (29, 7), (20, 5), (15, 7)]:
        code, out, _ = run_cli(capsys, "decide", str(n), str(m), "--format", "json")
        doc = json.loads(out)
        jsonschema.validate(doc, VERDICT_SCHEMA)
        assert doc["n"] == n and doc["m"] == m
        assert {0: "Exists", 1: "NotExists", 2: "Unknown"}[code] == doc["status"]


def test_construct_verify_round_trip(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "construct", "57", "7")
    assert code == 0
    path = tmp_path / "h57.txt"
    path.write_text(out)
    code, out, _ = run_cli(capsys, "verify", str(path))
    assert code == 0
    assert "PASS" in out


def test_construct_round_trip_many(capsys, tmp_path):
    for n, m in [(20, 5), (26, 5), (57, 7), (48, 7), (12, 2), (118, 7)]:
        code, out, _ = run_cli(capsys, "construct", str(n), str(m))
        assert code == 0
        path = tmp_path / ("h%d_%d.txt" % (n, m))
        path.write_text(out)
        code, out, _ = run_cli(capsys, "verify", str(path))
        assert code == 0, (n, m)


def test_construct_unknown_order(capsys):
    code, out, _ = run_cli(capsys, "construct", "15", "7")
    assert code == 2
    assert "no construction" in out


def test_construct_json_recipe_validates(capsys):
    code, out, _ = run_cli(capsys, "construct", "57", "7", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc["recipe"], RECIPE_SCHEMA)
    assert doc["materialized"] is True
    rows = doc["matrix"]
    assert len(rows) == 57 and all(len(r) == 57 for r in rows)


def test_construct_symbolic_when_capped(capsys):
    code, out, err = run_cli(
        capsys, "construct", "57", "7", "--materialize-cap", "16"
    )
    assert code == 0
    doc = json.loads(out)  # text mode falls back to the recipe tree on one line
    jsonschema.validate(doc, RECIPE_SCHEMA)
    assert "cap" in err


def test_verify_failure_exit(capsys, tmp_path):
    bad = "4 3\n++++\n++++\n++++\n++-+\n"
    path = tmp_path / "bad.txt"
    path.write_text(bad)
    code, out, _ = run_cli(capsys, "verify", str(path))
    assert code == 1
    assert "FAIL" in out


def test_verify_design_file(capsys, tmp_path):
    from modhadamard import catalog_design, format_matrix_text

    D, params = catalog_design("fano_7_3_1")
    path = tmp_path / "fano.txt"
    path.write_text(format_matrix_text(D, params=params))
    code, out, _ = run_cli(capsys, "verify-design", str(path))
    assert code == 0
    # the plain verify command dispatches on the header too
    code, out, _ = run_cli(capsys, "verify", str(path))
    assert code == 0


def test_search_command(capsys):
    code, out, _ = run_cli(capsys, "search", "11", "5", "--mode", "restricted")
    assert code == 1
    assert "165" in out
    code, out, _ = run_cli(capsys, "search", "4", "2")
    assert code == 0

    code, out, _ = run_cli(
        capsys, "search", "11", "5", "--mode", "restricted", "--format", "json"
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["exhausted"] is True
    assert doc["candidate_row_count"] == 165


def test_search_found_witness_verifies(capsys):
    code, out, _ = run_cli(capsys, "search", "8", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["found"] is not None
    assert len(doc["found"]) == 8


def test_nonexist_command(capsys):
    code, out, _ = run_cli(capsys, "nonexist", "15", "7")
    assert code == 1
    assert "88592" in out
    code, out, _ = run_cli(capsys, "nonexist", "20", "5")
    assert code == 2

    code, out, _ = run_cli(capsys, "nonexist", "11", "5", "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["established"] is True
    assert doc["delta_test"]["Delta"] == 24400


def test_condition1_table(capsys):
    code, out, _ = run_cli(capsys, "condition1", "11", "5")
    assert code == 0
    assert "292561" in out

    code, out, _ = run_cli(capsys, "condition1", "11", "5", "--format", "json")
    doc = json.loads(out)
    assert doc["missing"] == []
    assert doc["rows"][0]["q"] == 23
    assert doc["rows"][0]["d"] == 5
    assert doc["rows"][0]["r"] == 292561


def test_condition1_missing_witness(capsys):
    code, out, _ = run_cli(
        capsys, "condition1", "3", "1", "--q-limit", "5", "--d-limit", "1"
    )
    assert code == 2


def test_design_params_command(capsys):
    code, out, _ = run_cli(capsys, "design-params", "11", "23", "3")
    assert code == 0
    assert "25439" in out

    code, out, _ = run_cli(
        capsys, "design-params", "10", "29", "5", "6", "--format", "json"
    )
    doc = json.loads(out)
    assert doc["r"] == 732541
    assert doc["v"] == "4481157543653329008412788039760691035"


def test_design_params_constraints(capsys):
    code, out, _ = run_cli(
        capsys, "design-params", "10", "29", "5", "6",
        "--p", "7", "--n", "40", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["constraints"] == {
        "parity": True,
        "v_mod_p": True,
        "k_mod_p": True,
        "lambda_mod_p": True,
    }


def test_usage_errors_exit_10(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["decide", "57"])
    assert exc.value.code == 10
    capsys.readouterr()
    with pytest.raises(SystemExit) as exc:
        cli.main(["nosuchcommand"])
    assert exc.value.code == 10
    capsys.readouterr()


def test_domain_errors_exit_11(capsys):
    code, _, err = run_cli(capsys, "decide", "2", "5")
    assert code == 11
    assert "error:" in err
    code, _, err = run_cli(capsys, "search", "30", "5")
    assert code == 11


def test_env_var_caps(capsys, monkeypatch):
    monkeypatch.setenv("MODHADAMARD_MATERIALIZE_CAP", "16")
    code, out, err = run_cli(capsys, "construct", "57", "7")
    assert code == 0
    assert "cap" in err  # symbolic output, the env cap applied
    monkeypatch.setenv("MODHADAMARD_MATERIALIZE_CAP", "0")
    code, _, err = run_cli(capsys, "construct", "57", "7")
    assert code == 11


def test_console_script_installed():
    out = subprocess.run(
        [sys.executable, "-m", "modhadamard.cli", "decide", "20", "5"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0

    out = subprocess.run(
        ["modhadamard", "decide", "13", "7"], capture_output=True, text=True
    )
    assert out.returncode == 1
