import pytest
from hypothesis import given
from hypothesis import strategies as st
from support import example2, seeded

from jacobian_forms import Divisor, parse_divisor, principal_divisor
from jacobian_forms.errors import IncompleteSupport, SpecError

NAMES = ["P", "Q'1", "Q'3", "Q'4", "Q1", "Q2", "Q3", "Q4"]
divs = st.dictionaries(st.sampled_from(NAMES), st.integers(-9, 9), max_size=5)


def D(d):
    pts = example2().points
    return Divisor({pts[k]: v for k, v in d.items()})


def test_generator_divisors(spec):
    for name, want in spec.expected.items():
        assert principal_divisor(spec.generators[name], spec.universe) == want


def test_f1_f2_divisors(spec, pts):
    f1 = 1 / (spec.curve.x() - 1)
    f2 = spec.curve.y() / (spec.curve.x() - 1)
    assert principal_divisor(f1, spec.universe) == parse_divisor("Q1 + Q2 + Q3 + Q4 - 4P", pts)
    assert principal_divisor(f2, spec.universe) == parse_divisor("Q'1 + Q'3 + Q'4 - 3P", pts)


def test_incomplete_support(spec):
    with pytest.raises(IncompleteSupport):
        principal_divisor(spec.curve.x() - 5, spec.universe)


def test_parse_and_print(pts):
    d = parse_divisor("Q'1 + Q'3 + Q'4 - 3P", pts)
    assert d.degree == 0
    assert str(d) == "Q'1 + Q'3 + Q'4 - 3P"
    assert parse_divisor("0", pts) == Divisor()
    with pytest.raises(SpecError):
        parse_divisor("Q'1 + Z", pts)
    with pytest.raises(SpecError):
        parse_divisor("Q'1 Q'3", pts)


def test_min_of_worked_v_divisors(pts):
    given_divs = [
        "Q1 + Q2 + Q3 + Q4 + Q'1 + Q'3 + Q'4 - 7P",
        "3Q'1 + 3Q'3 + 3Q'4 - 9P",
        "2Q'1 + 2Q'3 + 2Q'4 - 6P",
        "Q1 + Q2 + Q3 + Q4 + 2Q'1 + 2Q'3 + 2Q'4 - 10P",
        "Q'1 + Q'3 + Q'4 - 3P",
    ]
    m = parse_divisor(given_divs[0], pts)
    for s in given_divs[1:]:
        m = m.min(parse_divisor(s, pts))
    assert m == parse_divisor("Q'1 + Q'3 + Q'4 - 10P", pts)


@seeded
@given(divs, divs)
def test_group_laws(a, b):
    x, y = D(a), D(b)
    assert x + y == y + x
    assert (x + y).degree == x.degree + y.degree
    assert x - x == Divisor()
    assert x * 3 == x + x + x
    assert x.min(y) <= x and x.max(y) >= y
    assert x.min(y) + x.max(y) == x + y


@seeded
@given(divs)
def test_text_round_trips(a):
    x = D(a)
    pts = example2().points
    assert Divisor.from_text(x.to_text(), pts) == x
    assert parse_divisor(str(x), pts) == x
