import json

import numpy as np
import pytest

from homocalc.cli import main
from homocalc.homog import angle_superlinear_family, disk_map, map_to_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_builtin(capsys):
    code, out, err = run(capsys, "eval", "--builtin", "example-7.1", "--x", "1,1")
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["value"] == 2.0
    assert doc["diagnostics"]["family_terms_used"] >= 1


def test_fc_builtin_rm(capsys):
    code, out, _ = run(
        capsys, "fc", "--builtin", "example-7.2", "--lattice", "rm",
        "--f", "2,5,-1", "--f", "3,-1,1",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["element"]["rm"] == pytest.approx([2.0, -1.0, 0.0])
    assert doc["diagnostics"]["max_residual"] == pytest.approx(0.0, abs=1e-12)


def test_fc_builtin_step(capsys):
    code, out, _ = run(
        capsys, "fc", "--builtin", "example-7.2", "--lattice", "step",
        "--f", "0,0.5,1|2,5", "--f", "0,0.5,1|3,-1",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["element"]["step"]["breakpoints"] == [0.0, 0.5, 1.0]
    assert doc["element"]["step"]["values"] == pytest.approx([2.0, -1.0])


def test_eval_family_file(capsys, tmp_path):
    doc = {"family": {"kind": "usc", "maps": [map_to_json(disk_map())]}}
    path = tmp_path / "family.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "eval", "--family", str(path), "--x", "3,4")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(5.0)


def test_saddle_build_and_eval(capsys, tmp_path):
    doc = {
        "phis": [map_to_json(disk_map())],
        "psis": [map_to_json(m) for m in angle_superlinear_family(8).maps],
    }
    inp = tmp_path / "input.json"
    inp.write_text(json.dumps(doc))
    saddle_path = tmp_path / "saddle.json"
    code, out, _ = run(capsys, "saddle-build", "--family", str(inp), "--out", str(saddle_path))
    assert code == 0
    assert saddle_path.read_text() == out
    code, out, _ = run(capsys, "saddle-eval", "--family", str(saddle_path), "--x", "1,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["infsup"] == pytest.approx(1.0, abs=1e-9)
    assert doc["supinf"] == pytest.approx(doc["infsup"], abs=1e-9)


def test_saddle_build_not_ordered_exits_3(capsys, tmp_path):
    doc = {
        "phis": [{"sublinear": {"subdiff": {"ball": {"center": [0.0, 0.0], "radius": 0.5}}}}],
        "psis": [{"superlinear": {"superdiff": {"polytope": {"vertices": [[1.0, 0.0]]}}}}],
    }
    inp = tmp_path / "bad.json"
    inp.write_text(json.dumps(doc))
    code, out, err = run(capsys, "saddle-build", "--family", str(inp))
    assert code == 3
    assert "error" in err


def test_unknown_builtin_exits_2(capsys):
    code, _, err = run(capsys, "eval", "--builtin", "nope", "--x", "1,1")
    assert code == 2
    assert "unknown name" in err


def test_bad_vector_exits_2(capsys):
    code, _, err = run(capsys, "eval", "--builtin", "example-7.1", "--x", "1,zap")
    assert code == 2


def test_schema_violation_reports_source_and_path(capsys, tmp_path):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps({"family": {"kind": "usc", "maps": [{"nonsense": {}}]}}))
    code, _, err = run(capsys, "eval", "--family", str(path), "--x", "1,1")
    assert code == 2
    doc = json.loads(err)
    assert "fam.json" in doc["error"]["message"]
    assert "maps[0]" in doc["error"]["message"]


def test_dimension_mismatch_exits_2(capsys):
    code, _, err = run(capsys, "eval", "--builtin", "example-7.1", "--x", "1,2,3")
    assert code == 2


def test_check_command_and_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "negative-controls")
    assert code == 0
    doc = json.loads(out)
    assert doc["name"] == "negative-controls" and doc["passed"] is True

    code, out, _ = run(capsys, "check", "rep-independence", "--tol", "1e-12")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_check_engine_vs_oracle_builtin_flag(capsys):
    code, out, _ = run(capsys, "check", "engine-vs-oracle", "--builtin", "example-7.2")
    assert code == 0
    assert json.loads(out)["name"] == "engine-vs-oracle[example-7.2]"


def test_seed_env_var_default(capsys, monkeypatch):
    monkeypatch.setenv("HOMOCALC_SEED", "17")
    code, out, _ = run(capsys, "check", "interchange")
    assert code == 0
    assert json.loads(out)["seed"] == 17
    monkeypatch.setenv("HOMOCALC_SEED", "not-a-number")
    code, _, err = run(capsys, "check", "interchange")
    assert code == 2


def test_seed_flag_overrides_env(capsys, monkeypatch):
    monkeypatch.setenv("HOMOCALC_SEED", "17")
    code, out, _ = run(capsys, "check", "interchange", "--seed", "4")
    assert json.loads(out)["seed"] == 4


def test_output_bytes_identical_and_out_file(capsys, tmp_path):
    outfile = tmp_path / "r.json"
    code, out1, _ = run(capsys, "eval", "--builtin", "square-mean", "--x", "3,4", "--out", str(outfile))
    assert code == 0
    assert outfile.read_text() == out1
    _, out2, _ = run(capsys, "eval", "--builtin", "square-mean", "--x", "3,4")
    assert out1 == out2


def test_budget_flag_limits_generated_builtin(capsys):
    code, out, _ = run(
        capsys, "eval", "--builtin", "example-7.1", "--x", "1,1", "--budget", "50"
    )
    assert code == 0
    assert json.loads(out)["diagnostics"]["family_terms_used"] <= 50


def test_fc_requires_elements(capsys):
    code, _, err = run(capsys, "fc", "--builtin", "example-7.1")
    assert code == 2
