import json
import subprocess
import sys

import pytest

from framekit.cli import main, run

from golden_cases import CASES, DATA, golden_path, invoke


def _run(*argv):
    code, out = run([str(a) for a in argv])
    return code, (json.loads(out) if code == 0 and "--format" not in argv else out)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    first = invoke(name)
    second = invoke(name)
    assert first[0] == 0
    assert first[1] == second[1]
    assert first[1].encode() == golden_path(name).read_bytes()


def test_analyze_example6():
    code, rep = _run("analyze", DATA / "example6.json")
    assert code == 0
    res = rep["results"]
    assert res["frame_operator_spectrum"] == [16.0, 3.0]
    assert res["tightness"]["is_tight"] is False
    assert set(res["tightness"]["conditions"].values()) == {False}


def test_analyze_complex_harmonic():
    code, rep = _run("analyze", DATA / "complex_harmonic.json")
    assert code == 0
    assert rep["results"]["field"] == "complex"
    assert rep["results"]["tightness"]["is_tight"]


def test_robustness_methods_and_indices():
    for method in ("brute", "nonspanning", "supports"):
        code, rep = _run("robustness", DATA / "example6.json", "--method", method)
        assert code == 0
        assert rep["results"]["rob"] == 2
        assert rep["results"]["max_nonspanning"] == [1, 2, 3]
        assert list(rep["results"]["methods"]) == [method]


def test_robustness_not_a_frame():
    code, msg = _run("robustness", DATA / "collinear.json")
    assert code == 4 and "span" in msg


def test_cap_exceeded():
    code, _ = _run("robustness", DATA / "example6.json", "--cap", "3")
    assert code == 5
    code, _ = _run("subframes", DATA / "doubled_basis.json", "--cap", "3")
    assert code == 5


def test_input_errors(tmp_path):
    assert _run("analyze", DATA / "bad_row.json")[0] == 2
    assert _run("analyze", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    for doc in ('{"field": "quaternion", "dim": 2, "vectors": [[1, 0]]}',
                '{"field": "real", "dim": 0, "vectors": [[1, 0]]}',
                '{"field": "real", "dim": 2, "vectors": []}',
                '{"field": "complex", "dim": 1, "vectors": [[1]]}',
                '{"field": "real", "dim": 1, "vectors": [["x"]]}',
                'not json'):
        bad.write_text(doc)
        assert _run("analyze", bad)[0] == 2, doc
    assert _run("lengths", "--n", "2", "--lengths", "1,-1", "check")[0] == 2
    assert _run("lengths", "--n", "2", "--lengths", "1,a", "check")[0] == 2
    assert _run("lengths", "--n", "1", "--lengths", "1,1", "replace-one")[0] == 2
    assert _run("surgery", DATA / "basis2.json", "--p", "1", "--q", "1", "--removed", "3")[0] == 2
    assert _run("surgery", DATA / "basis2.json", "--p", "1", "--q", "1", "--removed", "1,2")[0] == 2
    assert _run("analyze", DATA / "example6.json", "--tol-rel", "-1")[0] == 2


def test_subframes():
    code, rep = _run("subframes", DATA / "doubled_basis.json")
    assert code == 0
    assert [s["indices"] for s in rep["results"]["subframes"]] == [[1, 2], [1, 4], [2, 3], [3, 4]]
    code, rep = _run("subframes", DATA / "mercedes_benz.json")
    assert rep["results"]["count"] == 0
    assert rep["warnings"] and "k=3 < 2n=4" in rep["warnings"][0]


def test_surgery_command():
    code, rep = _run("surgery", DATA / "basis2.json", "--p", "1", "--q", "1")
    assert code == 0
    un = rep["results"]["unrestricted"]
    assert un["feasible"] and un["removed"] == [1]
    code, rep = _run("surgery", DATA / "mercedes_benz.json", "--p", "0", "--q", "1", "--nonzero")
    assert rep["results"]["unrestricted"] == {"feasible": False}
    code, rep = _run("surgery", DATA / "doubled_basis.json", "--p", "1", "--q", "0",
                     "--unit-norm", "--removed", "1")
    assert rep["results"]["unit_norm"]["necessary"] == [{"removed": [1], "passes": False}]
    code, rep = _run("surgery", DATA / "doubled_basis.json", "--p", "1", "--q", "1",
                     "--unit-norm", "--search", "--seed", "3")
    assert code == 0
    nec = rep["results"]["unit_norm"]["necessary"]
    assert len(nec) == 4 and all(e["passes"] for e in nec)
    assert rep["results"]["unit_norm"]["search"]["status"] == "feasible"


def test_lengths_examples():
    code, rep = _run("lengths", "--n", "2", "--lengths", "1,1,1", "check")
    assert rep["results"]["tight_frame_set"] is True
    code, rep = _run("lengths", "--n", "2", "--lengths", "1,1,1", "replace-one")
    assert rep["results"]["b"] == [0.0, 1.41421356237]
    code, rep = _run("lengths", "--n", "2", "--lengths", "3,2,1,1,1", "surgery", "--p", "1", "--q", "0")
    assert rep["results"]["feasible"] is False and rep["results"]["kept"] is None


def test_tolerance_flags_and_environment(monkeypatch):
    code, rep = _run("analyze", DATA / "example6.json", "--tol-rel", "1e-6")
    assert rep["tolerances"]["rel_eps"] == 1e-6
    # global options are also accepted before the subcommand
    code, rep = _run("--tol-abs", "1e-9", "analyze", DATA / "example6.json")
    assert rep["tolerances"]["abs_floor"] == 1e-9
    monkeypatch.setenv("FRAMEKIT_TOL_REL", "1e-7")
    code, rep = _run("analyze", DATA / "example6.json")
    assert rep["tolerances"]["rel_eps"] == 1e-7
    code, rep = _run("analyze", DATA / "example6.json", "--tol-rel", "1e-5")
    assert rep["tolerances"]["rel_eps"] == 1e-5


def test_text_format():
    code, out = _run("robustness", DATA / "example6.json", "--format", "text")
    assert code == 0
    assert "results.rob: 2" in out.splitlines()
    assert "results.max_nonspanning: [1, 2, 3]" in out.splitlines()
    code, out = _run("lengths", "--n", "2", "--lengths", "1,1,1", "check", "--format", "text")
    assert code == 0 and "results.tight_frame_set: true" in out.splitlines()


def test_main_writes_streams(capsys):
    assert main(["lengths", "--n", "2", "--lengths", "2,1,1", "check"]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["tight_frame_set"] is False
    assert main(["analyze", str(DATA / "bad_row.json")]) == 2
    captured = capsys.readouterr()
    assert captured.out == "" and captured.err.startswith("framekit: error:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "framekit", "robustness", "example6.json"],
        cwd=DATA, capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["rob"] == 2
