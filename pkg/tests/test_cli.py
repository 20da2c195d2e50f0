import json
import subprocess
import sys

import pytest

from ladderlab import algcore, pimod as pm
from ladderlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def test_build_preprojective(capsys):
    code, data, _ = run_json(capsys, "build", "--type", "preprojective", "--n", "2")
    assert code == 0
    a = algcore.algebra_from_json(data)
    assert a.dim == 4 and algcore.algebra_check(a) == []


def test_build_tensor_with_field_matches_pi(capsys):
    _, pi, _ = run_json(capsys, "build", "--type", "preprojective", "--n", "3")
    _, t, _ = run_json(capsys, "build", "--type", "tensor", "--lambda", "k", "--n", "3")
    assert algcore.algebra_from_json(pi).mult.tolist() == algcore.algebra_from_json(t).mult.tolist()


def test_build_rejects_n_zero(capsys):
    code, _, err = run(capsys, "build", "--type", "preprojective", "--n", "0")
    assert code == 2 and "--n" in err


def test_build_module_and_complex(capsys, tmp_path):
    out = tmp_path / "m.json"
    assert run(capsys, "build", "--type", "module", "--module", "T2", "--lambda", "dual", "--out", str(out))[0] == 0
    m = pm.module_from_json(json.loads(out.read_text()), algcore.dual_numbers())
    assert m.dims == (2, 2)
    code, data, _ = run_json(capsys, "build", "--type", "complex", "--n", "2", "--seed", "3")
    assert code == 0 and data["hi"] - data["lo"] + 1 == len(data["objects"])


def test_verify_ladder(capsys):
    code, data, _ = run_json(capsys, "verify", "ladder", "--n", "3", "--lambda", "k", "--samples", "50", "--seed", "7")
    assert code == 0 and data["passed"]


def test_verify_nakayama_gate(capsys):
    code, data, err = run_json(capsys, "verify", "nakayama", "--lambda", "pathA2")
    assert code == 1
    assert "not selfinjective" in data["precondition"] and "not selfinjective" in err


def test_verify_second_recollement(capsys):
    code, data, _ = run_json(capsys, "verify", "recollement", "--which", "second", "--samples", "10")
    assert code == 0 and all(c["name"].startswith("second") for c in data["checks"])


@pytest.mark.parametrize("kind", ["ttf", "derived-ladder", "hom-embedding"])
def test_verify_other_kinds(capsys, kind):
    code, _, _ = run(capsys, "verify", kind, "--samples", "3", "--max-length", "2", "--max-degree", "2")
    assert code == 0


def test_derive_builtins(capsys):
    code, data, err = run_json(capsys, "derive", "--facts", "builtin:preprojective")
    assert code == 0 and "(infinite, period 4)" in err
    assert data["ladder"]["height_down"] == {"infinite": True, "period": 4}
    _, data, _ = run_json(capsys, "derive", "--facts", "builtin:bare")
    assert data["ladder"]["height_down"] == {"value": 1, "at_least": False}
    _, data, _ = run_json(capsys, "derive", "--facts", "builtin:compact-i")
    assert data["ladder"]["height_down"]["value"] == 2


def test_derive_from_file_with_trace(capsys, tmp_path):
    from ladderlab import laddercalc as lc
    path = tmp_path / "facts.json"
    path.write_text(lc.builtin_facts("compact-e").dumps())
    code, data, err = run_json(capsys, "derive", "--facts", str(path), "--trace")
    assert code == 0 and "R-H2DOWN" in err
    assert data["derivation"]["steps"]


def test_derive_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"atoms": ["adjoint(F,G)"]}')
    assert run(capsys, "derive", "--facts", str(bad))[0] == 2
    bad.write_text("{not json")
    assert run(capsys, "derive", "--facts", str(bad))[0] == 2
    assert run(capsys, "derive", "--facts", "builtin:nope")[0] == 2


def test_hom_and_ext(capsys):
    code, data, _ = run_json(capsys, "hom", "--x", "T1", "--y", "T2", "--stable")
    assert code == 0 and data["hom_dim"] == 1 and data["stable_hom_dim"] == 0
    _, ext, _ = run_json(capsys, "ext", "--x", "T1", "--y", "T2", "--max-degree", "2")
    assert ext["ext"][0] == data["hom_dim"]


def test_ext_through_t1_dual_numbers(capsys):
    code, data, _ = run_json(capsys, "ext", "--lambda", "dual", "--through", "T1", "--max-degree", "4")
    assert code == 0 and data["equal"] and data["lambda_ext"] == [1, 1, 1, 1, 1]


def test_bad_prime(capsys, monkeypatch):
    monkeypatch.setenv("LADDERLAB_PRIME", "100")
    assert run(capsys, "build", "--type", "preprojective")[0] == 2
    monkeypatch.setenv("LADDERLAB_PRIME", "7")
    _, data, _ = run_json(capsys, "build", "--type", "preprojective")
    assert data["field"] == {"kind": "gf", "p": 7}


def test_output_is_deterministic(capsys):
    argv = ("verify", "recollement", "--n", "3", "--samples", "5", "--seed", "11")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ladderlab.cli", "hom", "--x", "P1", "--y", "P1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["hom_dim"] == 1
