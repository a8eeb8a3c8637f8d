from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from support import seeded

from jacobian_forms import QQ, NumberField
from jacobian_forms.errors import DivisionByZero, SpecError

QI = NumberField([1, 0, 1], "t")
T = sympy.Symbol("t")
small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elems = st.tuples(small, small)


def mk(pair):
    return QI.from_coeffs(pair)


def sym(pair):
    return pair[0] + pair[1] * T


def reduce_sym(expr):
    return sympy.Poly(sympy.rem(sympy.expand(expr), T**2 + 1, T), T)


def coeffs_of(expr):
    p = reduce_sym(expr)
    c = p.all_coeffs()[::-1] + [0, 0]
    return (Fraction(str(c[0])), Fraction(str(c[1])))


def test_inverse_of_one_plus_t():
    t = QI.gen
    assert 1 / (1 + t) == (1 - t) / 2


def test_gen_squares_to_minus_one():
    assert QI.gen ** 2 == QI(-1)


def test_rational_field_is_degree_one():
    assert QQ.degree == 1
    assert QQ(Fraction(3, 4)) * 4 == QQ(3)


def test_reducible_min_poly_rejected():
    with pytest.raises(SpecError):
        NumberField([-1, 0, 1], "t")


def test_zero_division():
    with pytest.raises(DivisionByZero):
        QI(1) / QI(0)


def test_str_and_rational_view():
    assert QI(Fraction(1, 2)).is_rational()
    assert not QI.gen.is_rational()
    assert QI(Fraction(-3, 2)).to_fraction() == Fraction(-3, 2)


@seeded
@given(elems, elems)
def test_ring_ops_match_sympy(a, b):
    assert (mk(a) + mk(b)).coeffs == coeffs_of(sym(a) + sym(b))
    assert (mk(a) * mk(b)).coeffs == coeffs_of(sym(a) * sym(b))
    assert (mk(a) - mk(b)).coeffs == coeffs_of(sym(a) - sym(b))


@seeded
@given(elems)
def test_inverse_matches_sympy(a):
    x = mk(a)
    if x.is_zero():
        return
    inv = sympy.invert(sym(a), T**2 + 1, T)
    assert x.inverse().coeffs == coeffs_of(inv)
    assert x * x.inverse() == QI(1)


@seeded
@given(elems, elems, elems)
def test_distributive(a, b, c):
    x, y, z = mk(a), mk(b), mk(c)
    assert x * (y + z) == x * y + x * z


@seeded
@given(elems, st.integers(min_value=-4, max_value=6))
def test_power_consistent(a, e):
    x = mk(a)
    if x.is_zero() and e < 0:
        return
    acc = QI(1)
    for _ in range(abs(e)):
        acc = acc * x
    if e < 0:
        acc = acc.inverse()
    assert x ** e == acc


@seeded
@given(elems)
def test_hash_agrees_with_eq(a):
    assert hash(mk(a)) == hash(QI.from_coeffs(list(a)))
