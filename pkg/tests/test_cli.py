import subprocess
import sys

import pytest

from jacobian_forms.cli import main
from jacobian_forms.specfile import default_spec_path

TOY = str(default_spec_path().parent / "toy.spec")

TOY_FORM = """G = 4oo
n = 2
X[1,1] = 1 | 1
X[1,2] = x | 1
X[2,1] = x | 1
X[2,2] = x^2 | 1
"""


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_example2(capsys):
    code, out = run(capsys, "example2")
    assert code == 0
    assert "example2: all checks passed" in out
    assert "[FAIL]" not in out


def test_example2_emits_forms(capsys):
    code, out = run(capsys, "example2", "--emit-gforms", "--oracle")
    assert code == 0
    assert "-- z" in out and "X[5,5] = " in out
    assert "expansion oracle" in out


def test_add(capsys):
    code, out = run(capsys, "add", "D", "D'")
    assert code == 0
    assert "sum: 5Q'1 + Q'3 + Q'4 - 7P" in out


def test_add_non_principal_classes(capsys):
    code, out = run(capsys, "add", "Q'1 - P", "Q'3 - P")
    assert code == 0
    assert "sum: Q'1 + Q'3 - 2P" in out


def test_negate(capsys):
    code, out = run(capsys, "negate", "Q'1 - P")
    assert code == 0
    assert out.startswith("negation: ")


def test_nonzero_degree_is_spec_error(capsys):
    code, out = run(capsys, "add", "Q'1", "D")
    assert code == 2
    assert "PreconditionError" in out


def test_unknown_point(capsys):
    code, _ = run(capsys, "negate", "Z9 - P")
    assert code == 2


def test_bad_precision_cap(capsys):
    code, _ = run(capsys, "example2", "--precision-cap", "4")
    assert code == 2


def test_imperfect_pairing(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text(default_spec_path().read_text().replace("f4E = g1^-7", "f4E = g1^-6"))
    code, out = run(capsys, "example2", "--spec", str(bad))
    assert code == 1
    assert "ImperfectPairing" in out


def test_validate_and_abel_gform(tmp_path, capsys):
    f = tmp_path / "toy.gform"
    f.write_text(TOY_FORM)
    code, out = run(capsys, "validate", "--spec", TOY, str(f))
    assert code == 0
    assert "represents: " in out
    code, out = run(capsys, "abel", "--spec", TOY, str(f))
    assert code == 0
    assert out.startswith("n = 2\nslots = 0,1,2,3\n")
    j = tmp_path / "toy.jacobi"
    j.write_text(out)
    code, out = run(capsys, "validate", "--spec", TOY, str(j))
    assert code == 0
    assert "item 2: pass" in out


def test_validate_broken_gform(tmp_path, capsys):
    f = tmp_path / "bad.gform"
    f.write_text(TOY_FORM.replace("X[2,2] = x^2 | 1", "X[2,2] = x^2 + 1 | 1"))
    code, out = run(capsys, "validate", "--spec", TOY, str(f))
    assert code == 1
    assert "minor" in out


def test_zero_jacobi_matrix(tmp_path, capsys):
    f = tmp_path / "zero.jacobi"
    f.write_text("n = 2\nslots = 0,1,2,3\n" + "".join(f"Z[{i},{j}] = 0 | 1\n" for i in (1, 2) for j in (1, 2)))
    code, out = run(capsys, "validate", "--spec", TOY, str(f))
    assert code == 1
    assert "item 2: fail" in out


def test_missing_file(capsys):
    code, _ = run(capsys, "validate", "/nonexistent/file")
    assert code == 2


def test_console_script_help():
    out = subprocess.run(
        [sys.executable, "-m", "jacobian_forms.cli", "--help"], capture_output=True, text=True, check=False
    )
    assert out.returncode == 0
    assert "example2" in out.stdout


@pytest.mark.parametrize("argv", [["add", "D"], ["bogus"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
