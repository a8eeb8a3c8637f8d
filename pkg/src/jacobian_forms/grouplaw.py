"""The group law on 2E-forms.

Addition takes the Kronecker product of two 2E-forms, extracts a 4E-form
block from it, and compresses that block back to a 2E-form with a
residue functional supported on E.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .divisors import Divisor
from .errors import (
    DimensionMismatch,
    ImperfectPairing,
    KGeneralityFailure,
    PivotSearchExhausted,
    PreconditionError,
)
from .funcfield import FuncElem, KEchelon, _coord_vectors
from .gform import GForm, form_size, transpose_gform
from .linalg import adjugate, det, greedy_cols, greedy_rows, matmul, rank
from .localgeom import differential_series, local_series, ord_at
from .rrspace import GeneratorSet, lspace_basis

__all__ = [
    "CompressionFunctional",
    "JacobianContext",
    "add_forms",
    "build_compression",
    "context_from_spec",
    "form_for_divisor",
    "group_add",
    "group_negate",
    "kron",
    "reduce_form",
    "zero_form",
]


@dataclass
class JacobianContext:
    E: Divisor
    gens: GeneratorSet
    f4E: FuncElem
    omega: tuple  # (coefficient, coordinate name)
    universe: list
    _compression: CompressionFunctional | None = field(default=None, repr=False)

    def __post_init__(self):
        g = self.curve.genus
        if not self.E.is_effective() or not self.E:
            raise PreconditionError("E must be a nonzero effective divisor")
        if self.E.degree < 2 * g + 1:
            raise PreconditionError(f"deg E = {self.E.degree} < 2g + 1 = {2 * g + 1}")
        if self.omega[1] not in ("x", "y"):
            raise PreconditionError("omega must be given against dx or dy")

    @property
    def curve(self):
        return self.f4E.curve

    @property
    def n(self) -> int:
        return self.E.degree - self.curve.genus + 1

    @property
    def G(self) -> Divisor:
        return self.E * 2

    def compression(self) -> CompressionFunctional:
        if self._compression is None:
            self._compression = build_compression(self)
        return self._compression


def context_from_spec(spec, gens=None) -> JacobianContext:
    ctx = spec.context
    for key in ("E", "f4E", "omega"):
        if key not in ctx:
            raise PreconditionError(f"spec has no context entry {key!r}")
    names = gens or ctx.get("gens") or list(spec.generators)
    return JacobianContext(ctx["E"], spec.generator_set(names), ctx["f4E"], ctx["omega"], spec.universe)


# ---------------------------------------------------------------------------


def kron(A, B):
    """Block Kronecker product: block (i, j) is A[i][j] * B."""
    rb, cb = len(B), len(B[0])
    out = []
    for i in range(len(A)):
        for k in range(rb):
            out.append([A[i][j] * B[k][l] for j in range(len(A[0])) for l in range(cb)])
    return out


def _select_basis(cands: list, count: int) -> list:
    """Indices of ``count`` k-independent entries; a constant is tried first."""
    order = list(range(len(cands)))
    consts = [i for i in order if cands[i].is_const() and not cands[i].is_zero()]
    if consts:
        order.remove(consts[0])
        order.insert(0, consts[0])
    vecs, _ = _coord_vectors(cands)
    ech = KEchelon()
    chosen = []
    for i in order:
        if vecs[i] and ech.add(vecs[i]):
            chosen.append(i)
            if len(chosen) == count:
                break
    if len(chosen) < count:
        raise KGeneralityFailure(f"only {len(chosen)} independent entries, need {count}")
    return chosen[::-1]


def add_forms(X: GForm, Y: GForm) -> GForm:
    """A (G + G')-form representing D + D' cut out of the Kronecker product."""
    g = X.curve.genus
    hx, hy = X.G.degree // 2, Y.G.degree // 2
    if min(hx, hy) < 2 * g or max(hx, hy) < 2 * g + 1:
        raise PreconditionError(f"half degrees {hx}, {hy} are too small for genus {g}")
    G = X.G + Y.G
    n = form_size(G, g)
    ux, vx = X.factorization()
    uy, vy = Y.factorization()
    u = [a * b for a in ux for b in uy]
    v = [a * b for a in vx for b in vy]
    ru = _select_basis(u, n)
    cv = _select_basis(v, n)
    nu = [u[i] for i in ru]
    nv = [v[j] for j in cv]
    entries = [[a * b for b in nv] for a in nu]
    return GForm(G, entries, X.universe, nu, nv)


# ---------------------------------------------------------------------------


@dataclass
class CompressionFunctional:
    """rho(h) = sum over x in supp E of Res_x(f4E h omega)."""

    ctx: JacobianContext
    gram_rank: int = 0

    def __call__(self, h: FuncElem):
        K = self.ctx.curve.field
        if h.is_zero():
            return K.zero
        w, coord = self.ctx.omega
        total = K.zero
        for pt in self.ctx.E.support():
            s = differential_series(h * self.ctx.f4E * w, coord, pt, 0)
            total = total + s.coeff(-1)
        return total

    def matrix(self, us, vs):
        """rho(u_i v_j) for all i, j, via one series per factor."""
        K = self.ctx.curve.field
        w, coord = self.ctx.omega
        M = [[K.zero] * len(vs) for _ in us]
        for pt in self.ctx.E.support():
            wf = self.ctx.f4E * w
            vu = min(ord_at(a, pt) for a in us if a)
            vv = min(ord_at(b, pt) for b in vs if b)
            vw = ord_at(wf, pt)
            W = differential_series(wf, coord, pt, 1 - vu - vv)
            vw = W.valuation
            U = [local_series(a, pt, 1 - vv - vw) if a else None for a in us]
            V = [local_series(b, pt, 1 - vu - vw) if b else None for b in vs]
            for i, a in enumerate(U):
                if a is None:
                    continue
                aw = a * W
                for j, b in enumerate(V):
                    if b is None:
                        continue
                    acc = K.zero
                    for k in range(b.valuation, -aw.valuation):
                        c = b.coeff(k)
                        if c:
                            acc = acc + c * aw.coeff(-1 - k)
                    M[i][j] = M[i][j] + acc
        return M


def build_compression(ctx: JacobianContext) -> CompressionFunctional:
    """Construct rho and verify that it is an E-compression functional for 4E."""
    E = ctx.E
    w, coord = ctx.omega
    curve = ctx.curve
    for pt in E.support():
        of = ord_at(ctx.f4E, pt)
        if of != 4 * E[pt]:
            raise ImperfectPairing(f"ord_{pt.label} f4E = {of}, expected {4 * E[pt]}")
        dw = differential_series(w, coord, pt, 0)
        if dw.valuation + E[pt] != 0:
            raise ImperfectPairing(f"ord_{pt.label} omega = {dw.valuation}, expected {-E[pt]}")
    rho = CompressionFunctional(ctx)
    # kernel contains L(3E)
    for h in lspace_basis(E * 3, ctx.gens):
        if rho(h):
            raise ImperfectPairing("rho does not vanish on L(3E)")
    B = lspace_basis(E * 2, ctx.gens).elements
    gram = rho.matrix(B, B)
    r = rank(curve.field, gram)
    if r != E.degree:
        raise ImperfectPairing(f"pairing on L(2E)/L(E) has rank {r}, expected {E.degree}")
    rho.gram_rank = r
    return rho


def reduce_form(X: GForm, rho: CompressionFunctional) -> GForm:
    """A (G - 2E)-form representing D - E from a G-form representing D.

    The pivot block a is found by greedy row selection on rho(X) followed by
    greedy column selection on those rows.  The remaining rows and columns
    keep their order.  The result is scaled by |rho a| as in the
    denominator-free recipe.
    """
    ctx = rho.ctx
    K = ctx.curve.field
    e = ctx.E.degree
    G2 = X.G - ctx.E * 2
    g = X.curve.genus
    if X.G.degree % 2 or X.G.degree // 2 - e < 2 * g:
        raise PreconditionError("G-form is too small to compress by E")
    u, v = X.factorization()
    R = rho.matrix(u, v)
    rows = greedy_rows(K, R, e)
    if len(rows) < e:
        raise PivotSearchExhausted(f"rho(X) has rank {len(rows)} < deg E = {e}")
    cols = greedy_cols(K, [R[i] for i in rows], e)
    if len(cols) < e:
        raise PivotSearchExhausted("no invertible pivot block on the selected rows")
    rest_r = [i for i in range(len(u)) if i not in rows]
    rest_c = [j for j in range(len(v)) if j not in cols]
    ra = [[R[i][j] for j in cols] for i in rows]
    rb = [[R[i][j] for j in rest_c] for i in rows]
    rc = [[R[i][j] for j in cols] for i in rest_r]
    da = det(K, ra)
    if not da:
        raise PivotSearchExhausted("pivot block is singular")
    adj = adjugate(K, ra)
    left = matmul(rc, adj)  # (rho c)(rho a)^*
    right = matmul(adj, rb)  # (rho a)^*(rho b)
    q = [u[i] * da - _comb(left[k], [u[i0] for i0 in rows]) for k, i in enumerate(rest_r)]
    s = [v[j] * da - _comb([right[m][k] for m in range(e)], [v[j0] for j0 in cols]) for k, j in enumerate(rest_c)]
    q = [a * da for a in q]
    entries = [[a * b for b in s] for a in q]
    out = GForm(G2, entries, X.universe, q, s)
    if out.n != form_size(G2, g):
        raise DimensionMismatch("compressed block has the wrong size")
    return out


def _comb(coeffs, fs):
    acc = fs[0].curve.zero()
    for c, f in zip(coeffs, fs):
        if c:
            acc = acc + f * c
    return acc


def group_add(X: GForm, Y: GForm, ctx: JacobianContext) -> GForm:
    for F in (X, Y):
        if F.G != ctx.G:
            raise PreconditionError(f"expected a 2E-form, got G = {F.G}")
    return reduce_form(add_forms(X, Y), ctx.compression())


def group_negate(X: GForm, ctx: JacobianContext | None = None) -> GForm:
    return transpose_gform(X)


def form_for_divisor(ctx: JacobianContext, D: Divisor, gens: GeneratorSet | None = None) -> GForm:
    """The 2E-form X_D built from bases of L(E + D) and L(E - D); D has degree 0."""
    if D.degree != 0:
        raise PreconditionError(f"deg D = {D.degree}, expected 0")
    gens = gens or ctx.gens
    u = lspace_basis(ctx.E + D, gens).elements
    v = lspace_basis(ctx.E - D, gens).elements
    entries = [[a * b for b in v] for a in u]
    return GForm(ctx.G, entries, ctx.universe, u, v)


def zero_form(ctx: JacobianContext) -> GForm:
    return form_for_divisor(ctx, Divisor({}))
