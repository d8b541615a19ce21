import json
import subprocess
import sys
from pathlib import Path

import pytest

from pccsolve import cli
from pccsolve.scenarios import library, parse_report
from pccsolve.scenarios.document import dump_document

FIXTURES = Path(__file__).parent / "fixtures"
BORDERLINE = FIXTURES / "borderline.json"


def write_library_fixture(tmp_path, name):
    path = tmp_path / f"{name}.json"
    path.write_text(dump_document(library.library_documents()[name]), encoding="utf-8")
    return path


def test_validate_valid_fixture(tmp_path, capsys):
    path = write_library_fixture(tmp_path, "dim4_AmB")
    assert cli.main(["validate", str(path)]) == 0
    out = capsys.readouterr().out
    assert "A  dim 4  outcomes -1 (rank 2), +1 (rank 2)  ok" in out


def test_validate_non_resolving_projectors(tmp_path, capsys):
    bad = {"dimension": 3, "observables": {"A": {"eigenvalues": [1, -1], "eigenspaces": [[[1, 0, 0]], [[0, 1, 0]]]}}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    assert cli.main(["validate", str(path)]) == 2
    assert "Σ E(α) ≠ I" in capsys.readouterr().err


def test_validate_missing_file(tmp_path, capsys):
    assert cli.main(["validate", str(tmp_path / "nope.json")]) == 2
    assert "nope.json" in capsys.readouterr().err


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"dimension": 2,\n  "observables": }')
    assert cli.main(["run", str(path)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        cli.main(["run"])
    assert info.value.code == 2


def test_run_dim4_shows_basis(tmp_path, capsys):
    path = write_library_fixture(tmp_path, "dim4_AmB")
    assert cli.main(["run", str(path)]) == 0
    out = capsys.readouterr().out
    assert "v1 = 1|+-⟩" in out and "v2 = 1|-+⟩" in out
    assert "seed:      42" in out


def test_run_json_output_parses_as_report(tmp_path, capsys):
    path = write_library_fixture(tmp_path, "dim5_AeqB")
    assert cli.main(["run", str(path), "--format", "json"]) == 0
    rep = parse_report(capsys.readouterr().out)
    assert rep.passed and rep.seed == 42 and rep.tolerance == {"abs": 1e-9, "rel": 1e-12}


def test_run_unmet_expectation_exits_1(tmp_path):
    doc = library.library_documents()["dim4_AmB"]
    doc["queries"][0]["expect"]["dimension"] = 3
    path = tmp_path / "wrong.json"
    path.write_text(dump_document(doc))
    assert cli.main(["run", str(path)]) == 1


def test_run_out_file_is_deterministic(tmp_path):
    path = write_library_fixture(tmp_path, "tensor_AmB")
    outs = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for o in outs:
        assert cli.main(["run", str(path), "--seed", "5", "--out", str(o)]) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    assert b"\r\n" not in outs[0].read_bytes()


def test_tolerance_sensitivity_on_borderline_fixture(capsys):
    verdicts = {}
    for tol in ("1e-9", "1e-3"):
        assert cli.main(["run", str(BORDERLINE), "--tol", tol, "--format", "json"]) == 0
        rep = parse_report(capsys.readouterr().out)
        verdicts[tol] = (rep.results[0].result["holds"], rep.results[1].result["feasible"])
        assert rep.tolerance["abs"] == float(tol)
    assert verdicts == {"1e-9": (False, False), "1e-3": (True, True)}


def test_paper_suite_all_pass(capsys):
    assert cli.main(["paper-suite"]) == 0
    out = capsys.readouterr().out
    assert "0 failed" in out and "ghz_triple" in out


def test_paper_suite_filter(capsys):
    assert cli.main(["paper-suite", "--filter", "dim5*", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [r["scenario"] for r in data["reports"]] == ["dim5_AmB", "dim5_AeqB", "dim5_joint"]
    for r in data["reports"]:
        parse_report(json.dumps(r))


def test_paper_suite_detects_corrupted_projector(monkeypatch, capsys):
    real = library.library_documents

    def corrupted():
        docs = real()
        # swap B's eigenspaces in the dim-4 scenario: still a valid observable, wrong physics
        obs = docs["dim4_AmB"]["observables"]["B"]
        obs["eigenspaces"] = obs["eigenspaces"][::-1]
        return docs

    monkeypatch.setattr(library, "library_documents", corrupted)
    assert cli.main(["paper-suite"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_module_entry_point_is_byte_identical_across_runs(tmp_path):
    path = write_library_fixture(tmp_path, "ghz_triple")
    cmd = [sys.executable, "-m", "pccsolve", "run", str(path), "--format", "json", "--seed", "11"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["seed"] == 11
