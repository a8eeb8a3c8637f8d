import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from support import class_form, example2, rng, seeded, small_classes

from jacobian_forms import (
    Divisor,
    abel_map,
    add_forms,
    extract_divisor,
    form_for_divisor,
    group_add,
    group_negate,
    k_proportional,
    kron,
    lspace_basis,
    reduce_form,
    residue_at,
    validate_gform,
    zero_form,
)
from jacobian_forms.errors import (
    ImperfectPairing,
    PivotSearchExhausted,
    PreconditionError,
)
from jacobian_forms.grouplaw import (
    CompressionFunctional,
    JacobianContext,
    context_from_spec,
)
from jacobian_forms.specfile import default_spec_path, parse_spec


def test_kron_blocks():
    A = [[1, 2], [3, 4]]
    B = [[0, 5], [6, 7]]
    K = kron(A, B)
    assert K[0] == [0, 5, 0, 10]
    assert K[3] == [18, 21, 24, 28]


def test_context_shape(ctx):
    assert ctx.n == 5
    assert ctx.G == ctx.E * 2


def test_small_E_rejected(spec, pts):
    c = spec.context
    with pytest.raises(PreconditionError):
        JacobianContext(Divisor({pts["P"]: 6}), spec.generator_set(), c["f4E"], c["omega"], spec.universe)


def test_pairing_is_perfect(ctx):
    rho = ctx.compression()
    assert rho.gram_rank == 7


def test_rho_kills_L3E(ctx):
    rho = ctx.compression()
    for h in lspace_basis(ctx.E * 3, ctx.gens):
        assert not rho(h)


def test_rho_matrix_matches_direct_residues(spec, ctx):
    # rho via series products against one residue per entry
    rho = ctx.compression()
    B = lspace_basis(ctx.E * 2, ctx.gens).elements[:6]
    w, coord = ctx.omega
    P = spec.points["P"]
    M = rho.matrix(B, B)
    for i, a in enumerate(B):
        for j, b in enumerate(B):
            assert M[i][j] == residue_at(a * b * ctx.f4E, (w, coord), P)


def test_wrong_f4E_is_imperfect():
    text = default_spec_path().read_text().replace("f4E = g1^-7", "f4E = g1^-6")
    ctx = context_from_spec(parse_spec(text))
    with pytest.raises(ImperfectPairing, match="f4E"):
        ctx.compression()


def test_worked_example_sum(spec, ctx):
    D, D2 = spec.divisors["D"], spec.divisors["D'"]
    XD, XD2 = form_for_divisor(ctx, D), form_for_divisor(ctx, D2)
    block = add_forms(XD, XD2)
    assert block.n == 12
    assert validate_gform(block).ok
    z = group_add(XD, XD2, ctx)
    assert z.n == 5
    assert validate_gform(z).ok
    assert extract_divisor(z) == ctx.E + D + D2


def test_group_add_rejects_other_G(spec, ctx):
    XD = form_for_divisor(ctx, spec.divisors["D"])
    big = add_forms(XD, XD)
    with pytest.raises(PreconditionError):
        group_add(big, XD, ctx)


def test_pivot_search_exhausted(spec, ctx):
    class Dead(CompressionFunctional):
        def matrix(self, us, vs):
            K = self.ctx.curve.field
            return [[K.zero] * len(vs) for _ in us]

    XD = form_for_divisor(ctx, spec.divisors["D"])
    with pytest.raises(PivotSearchExhausted):
        reduce_form(add_forms(XD, XD), Dead(ctx))


def test_nonzero_degree_rejected(ctx, pts):
    with pytest.raises(PreconditionError):
        form_for_divisor(ctx, Divisor({pts["P"]: 1}))


def test_negation_and_identity(ctx):
    D = small_classes(1, 11)[0]
    X = class_form(D)
    Y = group_add(X, group_negate(X, ctx), ctx)
    assert k_proportional(abel_map(Y), abel_map(zero_form(ctx)), rng=rng(4))


@seeded
@settings(max_examples=4)
@given(st.integers(0, 10**6))
def test_sum_matches_direct_form(k):
    ctx = context_from_spec(example2())
    D1, D2 = small_classes(2, k)
    z = group_add(class_form(D1), class_form(D2), ctx)
    assert validate_gform(z).ok
    assert k_proportional(abel_map(z), abel_map(class_form(D1 + D2)), rng=rng(k))
