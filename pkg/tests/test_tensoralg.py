import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from support import SEED, example2_context, rng, seeded, toy

from jacobian_forms import (
    JacobiMatrix,
    MultiSlotElem,
    abel_map,
    abeliant,
    discriminant,
    jacobi_validate,
    k_proportional,
    slot_embed,
)
from jacobian_forms.errors import SizeMismatch
from jacobian_forms.modular import modular_context
from jacobian_forms.tensoralg import (
    SlotMap,
    abel_closed_form,
    abeliant_oracle,
    adjugate,
    jacobi_from_text,
    ring_det,
)

ints = st.integers(-4, 4)


def square(n):
    return st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n)


@st.composite
def abeliant_inputs(draw):
    n = draw(st.sampled_from([2, 3]))
    return [draw(square(n)) for _ in range(n + 2)]


# determinants and adjugates ----------------------------------------------


@seeded
@given(st.integers(1, 4).flatmap(square))
def test_ring_det_matches_sympy(M):
    assert ring_det(M) == sympy.Matrix(M).det()


@seeded
@given(st.integers(1, 4).flatmap(square))
def test_adjugate_identity(M):
    A = adjugate(M)
    d = ring_det(M)
    n = len(M)
    prod = [[sum(M[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[d if i == j else 0 for j in range(n)] for i in range(n)]
    assert A == [list(r) for r in sympy.Matrix(M).adjugate().tolist()]


def test_adjugate_small_cases():
    assert adjugate([[1, 2], [3, 4]]) == [[4, -2], [-3, 1]]
    assert adjugate([[5]]) == [[1]]
    with pytest.raises(SizeMismatch):
        adjugate([[1, 2]])


# abeliant ---------------------------------------------------------------


@seeded
@given(abeliant_inputs())
def test_abeliant_matches_expansion(X):
    assert abeliant(X) == abeliant_oracle(X)


def test_abeliant_n1():
    assert abeliant([[[2]], [[7]], [[3]]]) == [[6]]


@seeded
@given(abeliant_inputs(), st.data())
def test_abeliant_linear_in_outer_matrices(X, data):
    n = len(X) - 2
    Y0 = data.draw(square(n))
    Z1 = abeliant(X)
    Z2 = abeliant([Y0] + X[1:])
    Zs = abeliant([[[a + b for a, b in zip(r, s)] for r, s in zip(X[0], Y0)]] + X[1:])
    assert Zs == [[a + b for a, b in zip(r, s)] for r, s in zip(Z1, Z2)]
    Z3 = abeliant(X[:-1] + [[[3 * a for a in r] for r in X[-1]]])
    assert Z3 == [[3 * a for a in r] for r in Z1]


def test_abeliant_shape_errors():
    with pytest.raises(SizeMismatch):
        abeliant([[[1]]])
    with pytest.raises(SizeMismatch):
        abeliant([[[1, 0], [0, 1]]] * 3 + [[[1]]])


def test_discriminant_of_identities():
    eye = [[1, 0], [0, 1]]
    # |2I|^2 * |2I|^2 * |2I|^2 = 4^6
    assert discriminant([eye, eye, eye]) == 4096


@seeded
@given(st.lists(square(2), min_size=3, max_size=3))
def test_discriminant_matches_sympy(X):
    Ms = [sympy.Matrix(M) for M in X]
    base = (Ms[0] + Ms[1]).det() ** 2
    want = base * ((Ms[1] + Ms[2]).det() ** 2) * ((Ms[0] + Ms[2]).det() ** 2)
    assert discriminant(X) == want


# multi-slot elements ------------------------------------------------------


def _toy_fn(r: random.Random):
    c = toy().curve
    x, y = c.x(), c.y()
    e = c.const(r.randint(-2, 2)) + x * r.randint(-2, 2) + y * r.randint(-2, 2)
    if r.random() < 0.3:
        e = e / (x - r.choice([2, 3]))
    return e if e else c.one()


@st.composite
def slot_elems(draw):
    r = random.Random(draw(st.integers(0, 10**6)))
    acc = MultiSlotElem.const(toy().curve, 0)
    for _ in range(r.randint(1, 3)):
        term = MultiSlotElem.const(toy().curve, 1)
        for slot in r.sample(range(4), r.randint(1, 2)):
            term = term * slot_embed(_toy_fn(r), slot)
        acc = acc + term
    return acc


@seeded
@given(slot_elems(), slot_elems(), slot_elems())
def test_multislot_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiSlotElem.const(toy().curve, 0)


@seeded
@settings(max_examples=15)
@given(slot_elems(), slot_elems())
def test_evaluation_is_a_homomorphism(a, b):
    curve = toy().curve
    ctx = modular_context(curve.field)
    r = rng(7)
    pts = {s: ctx.random_point(curve, r) for s in range(4)}
    try:
        va, vb, vab, vs = (e.evaluate(ctx, pts) for e in (a, b, a * b, a + b))
    except ZeroDivisionError:
        return
    assert vab == va * vb % ctx.p
    assert vs == (va + vb) % ctx.p


def test_slot_embed_same_slot_is_product():
    c = toy().curve
    x, y = c.x(), c.y()
    assert slot_embed(x, 1) * slot_embed(y, 1) == slot_embed(x * y, 1)
    assert slot_embed(x, 1) * slot_embed(y, 2) != slot_embed(x * y, 1)


def test_slotmap_rename_merges():
    c = toy().curve
    x, y = c.x(), c.y()
    z = slot_embed(x, 1) * slot_embed(y, 2)
    assert SlotMap("rename", ((2, 1),)).apply(z) == slot_embed(x * y, 1)
    swapped = SlotMap("permute", ((1, 2), (2, 1))).apply(z)
    assert swapped == slot_embed(x, 2) * slot_embed(y, 1)


# Abel images on the toy curve --------------------------------------------


def toy_pair():
    c = toy().curve
    x, y = c.x(), c.y()
    one = c.one()
    X = [[a * b for b in (one, x)] for a in (one, x)]
    u2, v2 = (one, (y + 1) / (x - 1)), (x - 1, y - 1)
    X2 = [[a * b for b in v2] for a in u2]
    return X, X2


def test_abel_map_equals_closed_form():
    for X in toy_pair():
        Z = abel_map(X)
        u = [r[0] for r in X]
        v = [e / X[0][0] for e in X[0]]
        assert k_proportional(Z, abel_closed_form(u, v))


def test_abel_image_matches_generic_abeliant():
    # the generic abeliant over integers, specialized: slot-embedding the
    # constant matrix [[1,2],[3,6]] gives constant images
    X = [[1, 2], [3, 6]]
    c = toy().curve
    Xc = [[c.const(a) for a in r] for r in X]
    Z = abel_map(Xc)
    want = abeliant([X] * 4)
    for i in range(2):
        for j in range(2):
            assert Z.entries[i][j] == MultiSlotElem.const(c, want[i][j])


def test_different_classes_not_proportional():
    X, X2 = toy_pair()
    assert not k_proportional(abel_map(X), abel_map(X2))
    assert not k_proportional(abel_map(X), abel_map(X2, materialize=False), rng=rng(1))


def test_scalar_multiple_is_proportional():
    X, _ = toy_pair()
    c = toy().curve
    Z = abel_map(X)
    Zs = JacobiMatrix(2, c, [[e * 5 for e in r] for r in Z.entries])
    assert k_proportional(Z, Zs)


def test_materialized_and_factored_agree():
    X, _ = toy_pair()
    assert k_proportional(abel_map(X), abel_map(X, materialize=False), rng=rng(2))


def test_core_items_hold_for_toy_images():
    for X in toy_pair():
        rep = jacobi_validate(abel_map(X))
        assert rep.ok, str(rep)
        assert rep.items[1][0] == rep.items[2][0] == rep.items[6][0] == "pass"


def test_zero_matrix_fails_item_2():
    c = toy().curve
    zero = MultiSlotElem.const(c, 0)
    rep = jacobi_validate(JacobiMatrix(2, c, [[zero, zero], [zero, zero]]))
    assert rep.items[2][0] == "fail"
    assert not rep.ok


def test_nonvanishing_minor_fails_item_6():
    c = toy().curve
    one = MultiSlotElem.const(c, 1)
    zero = MultiSlotElem.const(c, 0)
    rep = jacobi_validate(JacobiMatrix(2, c, [[one, zero], [zero, one]]))
    assert rep.items[6][0] == "fail"


def test_full_level_reports_item_7():
    X, _ = toy_pair()
    rep = jacobi_validate(abel_map(X), "full", rng=rng(3))
    assert rep.items[7][0] == "reported"
    assert {4, 5} <= set(rep.items)


def test_text_round_trip():
    c = toy().curve
    for X in toy_pair():
        Z = abel_map(X)
        text = Z.to_text()
        back = jacobi_from_text(text, c)
        assert back.to_text() == text
        assert k_proportional(Z, back)


def test_factored_image_of_example2():
    ctx = example2_context()
    from support import class_form

    X = class_form(ctx.E * 0)
    Z = abel_map(X)
    assert not Z.materialized
    rep = jacobi_validate(Z, "core", ctx.G, ctx.universe, random.Random(SEED))
    assert rep.ok, str(rep)
    with pytest.raises(ValueError):
        Z.to_text()
