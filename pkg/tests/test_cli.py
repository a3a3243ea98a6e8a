import json
import os
import subprocess
import sys

import pytest

from abelaffine.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_h2(capsys):
    code, out, _ = run(capsys, "h2", "mu13_3d")
    assert code == 0 and out.splitlines()[0] == "7"


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "all")
    assert code == 0 and out.count(" ok ") == 21


def test_action_example(capsys):
    code, out, _ = run(capsys, "action", "a4_2d", "--params", "1,2")
    assert code == 0
    assert "linear [[1, 0], [1, 1]]" in out and "translation (1, 5/2)" in out


def test_action_float(capsys):
    code, out, _ = run(capsys, "action", "A1_2d", "--params", "1,0")
    assert code == 0 and "2.71828182845905" in out


def test_fingerprint(capsys):
    code, out, _ = run(capsys, "fingerprint", "all")
    assert code == 0 and len(json.loads(out)) == 21


def test_list_and_torus(capsys):
    assert run(capsys, "list")[0] == 0
    code, out, _ = run(capsys, "torus", "verify", "Gamma1")
    assert code == 0 and "p'' = q*q' + p + p'" in out


def test_arrows(capsys):
    code, out, _ = run(capsys, "arrows", "verify", "mu11_3d", "mu13_3d")
    assert code == 0 and "ok" in out
    code, out, _ = run(capsys, "arrows", "search", "mu13_3d", "mu11_3d")
    assert code == 1 and "orbit dimension" in out


def test_compare_actions(capsys):
    code, out, _ = run(capsys, "compare-actions", "--trials", "20")
    assert code == 0
    assert "A10_3d" in out and "erratum" in out and "MISMATCH" not in out


def test_unknown_name(capsys):
    code, _, err = run(capsys, "h2", "mu99_3d")
    assert code == 2 and "unknown" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_data_error(tmp_path, capsys):
    (tmp_path / "algebras").mkdir()
    (tmp_path / "algebras" / "x.json").write_text("[")
    code, _, err = run(capsys, "--data-dir", str(tmp_path), "list")
    assert code == 3 and "data error" in err


def test_env_var_and_console_entry(tmp_path):
    env = dict(os.environ, AFFINE_DATA_DIR=str(tmp_path))
    proc = subprocess.run([sys.executable, "-m", "abelaffine.cli", "list"], env=env, capture_output=True, text=True)
    assert proc.returncode == 3
