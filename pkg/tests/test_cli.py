import json

import pytest

from iltmoments.cli import EXIT_MISMATCH, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_csv(capsys):
    code, out, _ = run(capsys, "enumerate", "--r", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "class,F,g,cof,M"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 5
    assert [int(r[2]) for r in rows] == [12, 6, 12, 3, 6]
    assert [int(r[3]) for r in rows] == [4, 8, 6, 4, 5]
    assert [int(r[4]) for r in rows] == [4, 16, 2, 1, 1]


def test_enumerate_json_and_text(capsys):
    code, out, _ = run(capsys, "enumerate", "--r", "3", "--format", "json")
    doc = json.loads(out)
    assert set(doc) == {"meta", "results", "provenance"}
    assert doc["results"]["matrix_count"] == 3
    code, out, _ = run(capsys, "enumerate", "--r", "5")
    assert code == 0 and "c1" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate"],
        ["enumerate", "--r", "x"],
        ["moments", "--samples", "999"],
        ["moments", "--tol", "0.5"],
        ["moments", "--tol", "1e-13"],
        ["integrals", "--class", "f9"],
        ["integrals", "--class", "f1", "--method", "magic"],
        ["verify", "--threads", "0"],
        ["bogus"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE
    capsys.readouterr()


def test_compute_failure_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "--r", "7")
    assert code == 1 and "InvalidOrderError" in err


def test_missing_constants_file(capsys, tmp_path):
    code, _, err = run(capsys, "moments", "--constants", str(tmp_path / "nope.txt"))
    assert code == 1 and "nope.txt" in err


def test_malformed_constants_file(capsys, tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("gamma_V5 1.0\ngamma_V5 2.0\n")
    code, _, err = run(capsys, "verify", "--constants", str(p))
    assert code == 1 and "line 2" in err


def test_integrals_closed(capsys):
    code, out, _ = run(capsys, "integrals", "--class", "f2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["results"]["I_f2"]["provenance"] == "closed-form"
    assert doc["results"]["I_f2"]["uncertainty"] is None
    assert doc["provenance"]["script_I_f2"] == "closed-form"
    assert doc["results"]["I_f2_expression"] == "48*zeta3/pi^4"


def test_integrals_position_and_parametric(capsys):
    code, out, _ = run(capsys, "integrals", "--class", "f4", "--method", "position", "--format", "csv")
    assert code == 0
    assert "script_I_f4" in out and "position-cubature" in out
    code, out, _ = run(
        capsys, "integrals", "--class", "f6", "--method", "parametric", "--samples", "20000", "--format", "json"
    )
    doc = json.loads(out)
    assert doc["results"]["I_f6"]["provenance"] == "parametric-mc"
    assert doc["results"]["I_f6"]["uncertainty"] > 0
    code, out, _ = run(capsys, "integrals", "--class", "f8", "--method", "position", "--format", "json")
    doc = json.loads(out)
    assert doc["results"]["I_f8"]["value"] is None
    assert doc["results"]["script_I_f8"]["value"] > 0


def test_moments_json_is_deterministic_and_round_trips(capsys):
    argv = ["moments", "--samples", "1000", "--seed", "1", "--format", "json"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    code3, out3, _ = run(capsys, *argv, "--threads", "4")
    assert code1 == code2 == code3 == 0
    assert out1 == out2 == out3
    doc = json.loads(out1)
    assert json.dumps(doc, sort_keys=True, indent=2) + "\n" == out1
    assert set(doc["meta"]) == {"command", "seed", "samples", "tol", "version"}
    for name, field in doc["results"].items():
        if isinstance(field, dict):
            assert set(field) == {"value", "uncertainty", "provenance"}
            assert doc["provenance"][name] == field["provenance"]


def test_threads_environment_default(capsys, monkeypatch):
    monkeypatch.setenv("ILTMOMENTS_THREADS", "3")
    code, out, _ = run(capsys, "moments", "--samples", "1000", "--format", "json")
    monkeypatch.setenv("ILTMOMENTS_THREADS", "auto")
    code2, out2, _ = run(capsys, "moments", "--samples", "1000", "--format", "json")
    assert code == code2 == 0 and out == out2


def test_moments_text(capsys):
    code, out, _ = run(capsys, "moments", "--method", "position")
    assert code == 0
    assert "m4" in out and "internal-cubature" in out


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--tol", "1e-6")
    assert code == 0
    assert "FAIL" not in out


def test_verify_detects_mismatch(capsys, tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("gamma_V5 0.8\ngamma_V7 1.0189569061909014\ngamma_V8 1.1103912916056866\nT_D 26.603086153012953\n")
    code, out, _ = run(capsys, "verify", "--constants", str(p), "--format", "json")
    assert code == EXIT_MISMATCH
    assert json.loads(out)["results"]["failed"] == ["m4", "gamma2"]


def test_constants_command(capsys, tmp_path):
    p = tmp_path / "constants.txt"
    code, _, _ = run(capsys, "constants", "--output", str(p))
    assert code == 0
    code, out, _ = run(capsys, "verify", "--constants", str(p))
    assert code == 0, out
