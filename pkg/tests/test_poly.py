import sympy
from hypothesis import given
from hypothesis import strategies as st
from support import seeded

from jacobian_forms import QQ, Poly

X = sympy.Symbol("x")
coeffs = st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=6)


def P(cs):
    return Poly(QQ, [QQ(c) for c in cs])


def S(cs):
    return sympy.Poly(list(reversed(cs)), X, domain="QQ")


def as_list(p):
    return [p.coeff(k).to_fraction() for k in range(p.degree + 1)] if p else []


def sym_list(q):
    return [sympy.Rational(c) for c in reversed(q.all_coeffs())] if not q.is_zero else []


def same(p, q):
    return [sympy.Rational(c.numerator, c.denominator) for c in as_list(p)] == sym_list(q)


@seeded
@given(coeffs, coeffs)
def test_mul_add_match_sympy(a, b):
    assert same(P(a) * P(b), S(a) * S(b))
    assert same(P(a) + P(b), S(a) + S(b))


@seeded
@given(coeffs, coeffs)
def test_divmod_matches_sympy(a, b):
    if not any(b):
        return
    q, r = P(a).divmod(P(b))
    sq, sr = sympy.div(S(a), S(b))
    assert same(q, sq) and same(r, sr)


@seeded
@given(coeffs, coeffs)
def test_gcd_matches_sympy(a, b):
    if not any(a) or not any(b):
        return
    g = P(a).gcd(P(b))
    assert same(g, sympy.gcd(S(a), S(b)).monic())


def test_derivative_and_monic():
    p = P([1, 2, 3])
    assert as_list(p.derivative()) == [2, 6]
    assert p.monic().lc() == QQ(1)
    assert str(p) == "3*x^2 + 2*x + 1"
