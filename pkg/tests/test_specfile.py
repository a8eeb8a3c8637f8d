import pytest

from jacobian_forms import load_spec, parse_spec
from jacobian_forms.errors import SpecError
from jacobian_forms.specfile import default_spec_path, eval_expr

BASE = default_spec_path().read_text()


def test_shipped_spec(spec):
    assert spec.curve.genus == 3
    assert set(spec.generators) == {"f1", "f2", "g1", "g2", "h3", "h4"}
    assert spec.context["E"].degree == 7
    assert spec.context["omega"][1] == "y"
    assert str(spec.divisors["D'"]) == "4Q'1 - 4P"


def test_toy_spec(toy_spec):
    assert toy_spec.curve.genus == 1
    assert toy_spec.field.degree == 1


def test_missing_section():
    with pytest.raises(SpecError, match="points"):
        parse_spec("[field]\nmin_poly = t\n[curve]\nd = 2\nf = x^3 + 1\n")


def test_wrong_declared_divisor():
    bad = BASE.replace("f1 = 1/(x-1) : Q1 + Q2 + Q3 + Q4 - 4P", "f1 = 1/(x-1) : Q1 + Q2 + Q3 + Q4 - 3P - Q'1")
    with pytest.raises(SpecError, match="f1"):
        parse_spec(bad)


def test_point_off_curve():
    bad = BASE.replace("P = affine 1, 0", "P = affine 1, 1")
    with pytest.raises(SpecError):
        parse_spec(bad)


def test_bad_omega():
    bad = BASE.replace("omega = g1*g2 dy", "omega = g1*g2 dz")
    with pytest.raises(SpecError, match="omega"):
        parse_spec(bad)


def test_unreadable_file(tmp_path):
    with pytest.raises(SpecError):
        load_spec(tmp_path / "missing.spec")


def test_eval_expr_rejects_calls():
    with pytest.raises(SpecError):
        eval_expr("__import__('os')", {})
    assert eval_expr("2^3 - 1", {}) == 7
