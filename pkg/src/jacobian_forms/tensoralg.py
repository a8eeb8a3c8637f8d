"""Tensor powers of the function field, the abeliant and the abstract Abel map.

A ``MultiSlotElem`` is an element of the tensor product over k of copies of
the function field indexed by integer slots.  It is stored as one polynomial
in the variables x_l, y_l (y_l-degree below d) over a product of monic
univariate denominators q_l(x_l), with every q_l coprime to the numerator
content in x_l.  That form is unique, so equality is structural.
"""
from __future__ import annotations

import itertools
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .basefield import FieldScalar
from .errors import KGeneralityFailure, SizeMismatch
from .funcfield import Curve, FuncElem, k_linear_independent
from .modular import ModularContext, default_rng, mod_det, modular_context
from .poly import Poly

__all__ = [
    "MATERIALIZE_LIMIT",
    "JacobiMatrix",
    "JacobiReport",
    "MultiSlotElem",
    "SlotMap",
    "abel_closed_form",
    "abel_map",
    "abeliant",
    "abeliant_oracle",
    "adjugate",
    "discriminant",
    "jacobi_from_text",
    "jacobi_validate",
    "k_proportional",
    "parse_multislot",
    "ring_det",
    "slot_embed",
]

# Abel images with n above this are kept in factored form
MATERIALIZE_LIMIT = 3


# ---------------------------------------------------------------------------
# multi-slot elements


def _pmul_slot(terms, s, poly: Poly):
    """Multiply a term dict by poly(x_s), where s is a position in the exponent tuples."""
    out: dict = {}
    ix = 2 * s
    for mono, c in terms.items():
        for k, a in enumerate(poly.c):
            if not a:
                continue
            m = list(mono)
            m[ix] += k
            m = tuple(m)
            v = out.get(m)
            nv = c * a if v is None else v + c * a
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
    return out


class MultiSlotElem:
    __slots__ = ("_hash", "curve", "dens", "slots", "terms")

    def __init__(self, curve: Curve, slots, terms, dens):
        self.curve = curve
        self.slots = tuple(slots)
        self.terms = terms
        self.dens = tuple(dens)
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, curve: Curve, c) -> MultiSlotElem:
        c = curve.field(c)
        return cls(curve, (), {(): c} if c else {}, ())

    @classmethod
    def _build(cls, curve, slots, terms, dens) -> MultiSlotElem:
        terms = _reduce_y(curve, slots, terms)
        return _normalize(curve, slots, terms, dens)

    def _coerce(self, other):
        if isinstance(other, MultiSlotElem):
            return other
        if isinstance(other, (int, Fraction, FieldScalar)):
            return MultiSlotElem.const(self.curve, other)
        return NotImplemented

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldScalar)):
            other = MultiSlotElem.const(self.curve, other)
        if not isinstance(other, MultiSlotElem):
            return NotImplemented
        return self.slots == other.slots and self.dens == other.dens and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.slots, self.dens, frozenset(self.terms.items())))
        return self._hash

    # arithmetic ---------------------------------------------------------
    def _aligned(self, other):
        slots = tuple(sorted(set(self.slots) | set(other.slots)))
        return slots, _reindex(self, slots), _reindex(other, slots)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        slots, (ta, da), (tb, db) = self._aligned(other)
        dens = []
        for s in range(len(slots)):
            if da[s] == db[s]:
                dens.append(da[s])
                continue
            L = da[s].lcm(db[s])
            if L != da[s]:
                ta = _pmul_slot(ta, s, L.exact_div(da[s]))
            if L != db[s]:
                tb = _pmul_slot(tb, s, L.exact_div(db[s]))
            dens.append(L)
        out = dict(ta)
        for m, c in tb.items():
            v = out.get(m)
            nv = c if v is None else v + c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        return _normalize(self.curve, slots, out, dens)

    __radd__ = __add__

    def __neg__(self):
        return MultiSlotElem(self.curve, self.slots, {m: -c for m, c in self.terms.items()}, self.dens)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldScalar)):
            c = self.curve.field(other)
            if not c:
                return MultiSlotElem.const(self.curve, 0)
            return MultiSlotElem(self.curve, self.slots, {m: v * c for m, v in self.terms.items()}, self.dens)
        if not isinstance(other, MultiSlotElem):
            return NotImplemented
        if not self.terms or not other.terms:
            return MultiSlotElem.const(self.curve, 0)
        slots, (ta, da), (tb, db) = self._aligned(other)
        out: dict = {}
        for ma, ca in ta.items():
            for mb, cb in tb.items():
                m = tuple(a + b for a, b in zip(ma, mb))
                v = out.get(m)
                nv = ca * cb if v is None else v + ca * cb
                if nv:
                    out[m] = nv
                else:
                    out.pop(m, None)
        dens = [a * b if a.degree > 0 or b.degree > 0 else a for a, b in zip(da, db)]
        # disjoint slots need neither reduction nor gcd work
        disjoint = not (set(self.slots) & set(other.slots))
        if disjoint:
            return _drop_trivial(self.curve, slots, out, dens)
        return MultiSlotElem._build(self.curve, slots, out, dens)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        out = MultiSlotElem.const(self.curve, 1)
        for _ in range(e):
            out = out * self
        return out

    # slot maps ----------------------------------------------------------
    def substitute(self, mapping: dict) -> MultiSlotElem:
        """Relabel slots simultaneously; slots sent to the same target merge."""
        targets = [mapping.get(s, s) for s in self.slots]
        slots = tuple(sorted(set(targets)))
        pos = {s: i for i, s in enumerate(slots)}
        out: dict = {}
        width = 2 * len(slots)
        for mono, c in self.terms.items():
            m = [0] * width
            for i, t in enumerate(targets):
                m[2 * pos[t]] += mono[2 * i]
                m[2 * pos[t] + 1] += mono[2 * i + 1]
            m = tuple(m)
            v = out.get(m)
            nv = c if v is None else v + c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        one = Poly.const(self.curve.field, 1)
        dens = [one] * len(slots)
        for i, t in enumerate(targets):
            dens[pos[t]] = dens[pos[t]] * self.dens[i]
        return MultiSlotElem._build(self.curve, slots, out, dens)

    def slot_part_functions(self, slot: int) -> list:
        """Coefficient functions of ``slot`` against the monomials of the other slots."""
        if slot not in self.slots:
            return [self.curve.const(c) for c in self.terms.values()] if self.terms else []
        s = self.slots.index(slot)
        groups: dict = {}
        for mono, c in self.terms.items():
            key = mono[: 2 * s] + mono[2 * s + 2 :]
            groups.setdefault(key, {})[(mono[2 * s + 1], mono[2 * s])] = c
        K = self.curve.field
        out = []
        for g in groups.values():
            nums = [[K.zero] * (1 + max((k for (j, k) in g), default=0)) for _ in range(self.curve.d)]
            for (j, k), c in g.items():
                nums[j][k] = c
            out.append(self.curve.element([Poly(K, p) for p in nums], self.dens[s]))
        return out

    # evaluation ---------------------------------------------------------
    def evaluate(self, ctx: ModularContext, points: dict) -> int:
        p = ctx.p
        val = 0
        xs = [points[s][0] for s in self.slots]
        ys = [points[s][1] for s in self.slots]
        for mono, c in self.terms.items():
            t = ctx.scalar(c)
            for i in range(len(self.slots)):
                if mono[2 * i]:
                    t = t * pow(xs[i], mono[2 * i], p) % p
                if mono[2 * i + 1]:
                    t = t * pow(ys[i], mono[2 * i + 1], p) % p
            val = (val + t) % p
        for i, q in enumerate(self.dens):
            if q.degree > 0:
                qv = ctx.poly(q, xs[i])
                if qv == 0:
                    raise ZeroDivisionError("denominator vanishes at the sample point")
                val = val * pow(qv, -1, p) % p
        return val

    # printing -----------------------------------------------------------
    def num_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            factors = []
            for i, s in enumerate(self.slots):
                for name, e in ((f"x{s}", mono[2 * i]), (f"y{s}", mono[2 * i + 1])):
                    if e:
                        factors.append(name if e == 1 else f"{name}^{e}")
            mon = "*".join(factors)
            s = str(c)
            neg = False
            if c.is_rational():
                q = c.to_fraction()
                neg, s = q < 0, str(abs(q))
            if mon:
                s = mon if s == "1" else f"{s}*{mon}"
            parts.append(("-" if neg else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def den_str(self) -> str:
        fs = [f"({q.to_str(f'x{s}')})" for s, q in zip(self.slots, self.dens) if q.degree > 0]
        return "*".join(fs) if fs else "1"

    def to_text(self) -> str:
        return f"{self.num_str()} | {self.den_str()}"

    def __str__(self):
        d = self.den_str()
        return self.num_str() if d == "1" else f"({self.num_str()})/{d}"

    def __repr__(self):
        return f"MultiSlotElem({self})"


def _reindex(e: MultiSlotElem, slots):
    if e.slots == tuple(slots):
        return e.terms, list(e.dens)
    pos = [slots.index(s) for s in e.slots]
    width = 2 * len(slots)
    terms = {}
    for mono, c in e.terms.items():
        m = [0] * width
        for i, p in enumerate(pos):
            m[2 * p] = mono[2 * i]
            m[2 * p + 1] = mono[2 * i + 1]
        terms[tuple(m)] = c
    one = Poly.const(e.curve.field, 1)
    dens = [one] * len(slots)
    for i, p in enumerate(pos):
        dens[p] = e.dens[i]
    return terms, dens


def _reduce_y(curve: Curve, slots, terms):
    d = curve.d
    fc = [(k, a) for k, a in enumerate(curve.f.c) if a]
    out: dict = {}
    work = list(terms.items())
    while work:
        mono, c = work.pop()
        hi = next((i for i in range(len(slots)) if mono[2 * i + 1] >= d), None)
        if hi is None:
            v = out.get(mono)
            nv = c if v is None else v + c
            if nv:
                out[mono] = nv
            else:
                out.pop(mono, None)
            continue
        for k, a in fc:
            m = list(mono)
            m[2 * hi + 1] -= d
            m[2 * hi] += k
            work.append((tuple(m), c * a))
    return out


def _drop_trivial(curve, slots, terms, dens):
    keep = [
        i
        for i in range(len(slots))
        if dens[i].degree > 0 or any(m[2 * i] or m[2 * i + 1] for m in terms)
    ]
    if len(keep) == len(slots):
        return MultiSlotElem(curve, slots, terms, dens)
    nslots = tuple(slots[i] for i in keep)
    nterms = {}
    for m, c in terms.items():
        nterms[tuple(v for i in keep for v in (m[2 * i], m[2 * i + 1]))] = c
    return MultiSlotElem(curve, nslots, nterms, [dens[i] for i in keep])


def _normalize(curve, slots, terms, dens):
    if not terms:
        return MultiSlotElem.const(curve, 0)
    K = curve.field
    dens = list(dens)
    for s in range(len(slots)):
        q = dens[s]
        if q.degree <= 0:
            continue
        groups: dict = {}
        for mono, c in terms.items():
            key = mono[: 2 * s] + mono[2 * s + 1 :]
            groups.setdefault(key, {})[mono[2 * s]] = c
        polys = {}
        g = q
        for key, cs in groups.items():
            p = Poly(K, [cs.get(k, K.zero) for k in range(max(cs) + 1)])
            polys[key] = p
            if g.degree > 0:
                g = g.gcd(p)
        if g.degree <= 0:
            continue
        dens[s] = q.exact_div(g)
        terms = {}
        for key, p in polys.items():
            p = p.exact_div(g)
            for k, c in enumerate(p.c):
                if c:
                    terms[key[: 2 * s] + (k,) + key[2 * s :]] = c
    return _drop_trivial(curve, slots, terms, dens)


def slot_embed(e: FuncElem, l: int) -> MultiSlotElem:
    """e placed in slot l, 1 in every other slot."""
    curve = e.curve
    if e.is_zero():
        return MultiSlotElem.const(curve, 0)
    terms = {}
    for j, p in enumerate(e.nums):
        for k, c in enumerate(p.c):
            if c:
                terms[(k, j)] = c
    return _drop_trivial(curve, (l,), terms, [e.den])


# ---------------------------------------------------------------------------
# determinants and adjugates over a commutative ring


def _sum(items):
    acc = None
    for v in items:
        acc = v if acc is None else acc + v
    return acc


def ring_det(M, one=1):
    """Determinant by Laplace expansion over column subsets (no division)."""
    n = len(M)
    if n == 0:
        return one
    dp = {0: one}
    for r in range(n):
        nxt: dict = {}
        for mask, val in dp.items():
            for c in range(n):
                if mask >> c & 1:
                    continue
                a = M[r][c]
                if _is_zero(a):
                    continue
                term = val * a
                if (mask >> (c + 1)).bit_count() & 1:
                    term = -term
                key = mask | (1 << c)
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    return dp.get((1 << n) - 1, 0 * one)


def _is_zero(a) -> bool:
    if isinstance(a, MultiSlotElem):
        return a.is_zero()
    try:
        return not a
    except TypeError:
        return False


def adjugate(M, one=1):
    """Transpose of the cofactor matrix, so that M adj(M) = det(M) Id."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise SizeMismatch("adjugate needs a square matrix")
    if n == 1:
        return [[one]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            v = ring_det(minor, one)
            out[i][j] = -v if (i + j) % 2 else v
    return out


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            terms = [A[i][k] * B[k][j] for k in range(m) if not _is_zero(A[i][k]) and not _is_zero(B[k][j])]
            v = _sum(terms)
            row.append(v if v is not None else 0 * A[0][0])
        out.append(row)
    return out


def _mixed_adjugates(mats, one):
    """Coefficients of the multilinear adjugate of sum_b t_b mats[b].

    Returns A with A[j] the coefficient matrix of the monomial omitting t_j.
    Monomials repeating a variable are pruned as they arise.
    """
    n = len(mats)
    full = (1 << n) - 1
    A = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):  # adj[i][j] = (-1)^(i+j) det(minor without row j, col i)
        cols = [c for c in range(n) if c != i]
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            dp = {(0, 0): one}
            for r in rows:
                nxt: dict = {}
                for (cmask, vmask), val in dp.items():
                    for ci, c in enumerate(cols):
                        if cmask >> ci & 1:
                            continue
                        sign = (cmask >> (ci + 1)).bit_count() & 1
                        for b in range(n):
                            if vmask >> b & 1:
                                continue
                            a = mats[b][r][c]
                            if _is_zero(a):
                                continue
                            term = val * a
                            if sign:
                                term = -term
                            key = (cmask | (1 << ci), vmask | (1 << b))
                            nxt[key] = nxt[key] + term if key in nxt else term
                dp = nxt
            cfull = (1 << (n - 1)) - 1
            sgn = (i + j) % 2
            for omit in range(n):
                v = dp.get((cfull, full ^ (1 << omit)))
                if v is None:
                    v = 0 * one
                A[omit][i][j] = -v if sgn else v
    return A


def abeliant(X: Sequence, one=1):
    """The abeliant of n + 2 square n x n matrices over a commutative ring.

    Entry (i, j) is the coefficient of the monomial omitting s_i and t_j in
    trace(X0 (sum t_b X_b)^* X_{n+1} (sum s_a X_a)^*).
    """
    X = list(X)
    n = len(X) - 2
    if n < 1:
        raise SizeMismatch("abeliant needs n + 2 matrices with n >= 1")
    for M in X:
        if len(M) != n or any(len(r) != n for r in M):
            raise SizeMismatch(f"all matrices must be {n} x {n}")
    if n == 1:
        # adjugate of a 1 x 1 matrix is 1: the trace is X0 X2
        return [[X[0][0][0] * X[2][0][0]]]
    A = _mixed_adjugates(X[1 : n + 1], one)
    X0, Xn1 = X[0], X[n + 1]
    left = [_matmul(X0, A[j]) for j in range(n)]
    right = [_matmul(Xn1, A[i]) for i in range(n)]
    Z = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            P = left[j]
            R = right[i]
            terms = [
                P[a][b] * R[b][a]
                for a in range(n)
                for b in range(n)
                if not _is_zero(P[a][b]) and not _is_zero(R[b][a])
            ]
            v = _sum(terms)
            Z[i][j] = v if v is not None else 0 * one
    return Z


def abeliant_oracle(X: Sequence):
    """Independent check: full symbolic expansion with sympy (integer or rational entries)."""
    import sympy

    X = list(X)
    n = len(X) - 2
    s = sympy.symbols(f"s1:{n + 1}")
    t = sympy.symbols(f"t1:{n + 1}")
    Ms = [sympy.Matrix(M) for M in X]
    T = sum((t[b] * Ms[b + 1] for b in range(n)), sympy.zeros(n, n))
    S = sum((s[a] * Ms[a + 1] for a in range(n)), sympy.zeros(n, n))
    expr = sympy.expand((Ms[0] * T.adjugate() * Ms[n + 1] * S.adjugate()).trace())
    poly = sympy.Poly(expr, *s, *t)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            mono = tuple(0 if a == i else 1 for a in range(n)) + tuple(0 if b == j else 1 for b in range(n))
            row.append(poly.coeff_monomial(mono))
        out.append(row)
    return out


def discriminant(X: Sequence, one=1):
    """|sum_{l<=n} X_l|^(2n-2) * prod_i |sum_{l != i} X_l|^2 for n + 1 matrices X_1..X_{n+1}."""
    X = list(X)
    n = len(X) - 1
    if n < 1:
        raise SizeMismatch("discriminant needs n + 1 matrices with n >= 1")
    size = len(X[0])
    for M in X:
        if len(M) != size or any(len(r) != size for r in M):
            raise SizeMismatch("matrices must share one square size")

    def msum(idx):
        return [[_sum(X[l][r][c] for l in idx) for c in range(size)] for r in range(size)]

    base = ring_det(msum(range(n)), one)
    out = _power(base, 2 * n - 2, one)
    for i in range(n):
        d = ring_det(msum([l for l in range(n + 1) if l != i]), one)
        out = out * d * d
    return out


def _power(a, e, one):
    out = one
    for _ in range(e):
        out = out * a
    return out


# ---------------------------------------------------------------------------
# slot maps


@dataclass(frozen=True)
class SlotMap:
    """Slot operator used by the Jacobi conditions.

    ``rename``: data = ((a, b),) sends slot a to b, merging if b is present.
    ``permute``: data = ((a, pi(a)), ...) relabels simultaneously.
    ``merge``: data = ((a, b),) multiplies slot b into slot a.
    """

    kind: str
    data: tuple

    def mapping(self) -> dict:
        if self.kind == "merge":
            return {b: a for a, b in self.data}
        return dict(self.data)

    def apply(self, z: MultiSlotElem) -> MultiSlotElem:
        return z.substitute(self.mapping())

    def pull_points(self, points: dict) -> dict:
        """Sample points for z such that evaluating z there equals evaluating apply(z) at ``points``."""
        m = self.mapping()
        return {s: points[m.get(s, s)] for s in points}


# ---------------------------------------------------------------------------
# Jacobi matrices and the Abel map


@dataclass
class JacobiMatrix:
    """An n x n matrix over the tensor algebra, materialized or in factored form.

    Factored form keeps the factorization X = u v of the source Segre matrix;
    entry (i, j) is then beta_i delta_i alpha_j gamma_j with each factor an
    n x n determinant of slot-embedded entries of u or v.
    """

    n: int
    curve: Curve
    entries: list | None = None
    u: list | None = None
    v: list | None = None

    @property
    def slots(self) -> tuple:
        return tuple(range(self.n + 2))

    @property
    def materialized(self) -> bool:
        return self.entries is not None

    def evaluate(self, ctx: ModularContext, points: dict):
        """Entries modulo p at one curve point per slot."""
        n, p = self.n, ctx.p
        if self.entries is not None:
            return [[_eval_entry(self.entries[i][j], ctx, points) for j in range(n)] for i in range(n)]
        a, b = _factor_values(self.u, self.v, n, ctx, points)
        return [[a[i] * b[j] % p for j in range(n)] for i in range(n)]

    def to_text(self) -> str:
        if self.entries is None:
            raise ValueError("factored Jacobi matrices are serialized through their Segre matrix")
        lines = [f"n = {self.n}", f"slots = {','.join(map(str, self.slots))}"]
        for i in range(self.n):
            for j in range(self.n):
                lines.append(f"Z[{i + 1},{j + 1}] = {_entry_text(self.entries[i][j])}")
        return "\n".join(lines) + "\n"

    def normalized_text(self) -> str:
        """Serialization of the proportionality class: first nonzero entry scaled to 1."""
        if self.entries is None:
            raise ValueError("factored Jacobi matrices are serialized through their Segre matrix")
        first = next(
            (e for r in self.entries for e in r if isinstance(e, MultiSlotElem) and e), None
        )
        if first is None:
            return self.to_text()
        lead = first.terms[max(first.terms)]
        inv = lead.inverse()
        scaled = [[e * inv for e in r] for r in self.entries]
        return JacobiMatrix(self.n, self.curve, scaled).to_text()


def _entry_text(e) -> str:
    return e.to_text() if isinstance(e, MultiSlotElem) else f"{e} | 1"


def _eval_entry(e, ctx, points):
    if isinstance(e, MultiSlotElem):
        return e.evaluate(ctx, points)
    return ctx.scalar(e.curve.field(e)) if isinstance(e, FuncElem) else int(e) % ctx.p


def _factor_values(u, v, n, ctx, points):
    """(beta_i delta_i) and (alpha_j gamma_j) modulo p."""
    p = ctx.p
    uv = {l: [ctx.func(e, points[l]) for e in u] for l in range(n + 2)}
    vv = {l: [ctx.func(e, points[l]) for e in v] for l in range(n + 2)}
    # U has columns u^(1..n); V has rows v^(1..n)
    U = [[uv[l + 1][r] for l in range(n)] for r in range(n)]
    V = [list(vv[l + 1]) for l in range(n)]

    def col_swap(M, i, col):
        return [[col[r] if c == i else M[r][c] for c in range(n)] for r in range(n)]

    def row_swap(M, i, row):
        return [list(row) if r == i else list(M[r]) for r in range(n)]

    beta = [mod_det(col_swap(U, i, uv[0]), p) for i in range(n)]
    gamma = [mod_det(col_swap(U, i, uv[n + 1]), p) for i in range(n)]
    alpha = [mod_det(row_swap(V, i, vv[0]), p) for i in range(n)]
    delta = [mod_det(row_swap(V, i, vv[n + 1]), p) for i in range(n)]
    a = [beta[i] * delta[i] % p for i in range(n)]
    b = [alpha[j] * gamma[j] % p for j in range(n)]
    return a, b


def abel_map(X, materialize: bool | None = None) -> JacobiMatrix:
    """Abel image of a Segre matrix: the abeliant of its slot-embedded copies.

    For n up to ``MATERIALIZE_LIMIT`` the abeliant is expanded exactly in the
    tensor algebra.  Larger images are kept in factored form.
    """
    from .gform import GForm

    entries = X.entries if isinstance(X, GForm) else X
    n = len(entries)
    curve = entries[0][0].curve
    if materialize is None:
        materialize = n <= MATERIALIZE_LIMIT
    try:
        u, v = X.factorization() if isinstance(X, GForm) else _factor_rows(entries)
    except KGeneralityFailure:
        if not materialize:
            raise
        u = v = None
    if materialize:
        one = MultiSlotElem.const(curve, 1)
        copies = [[[slot_embed(e, l) for e in r] for r in entries] for l in range(n + 2)]
        Z = abeliant(copies, one)
        return JacobiMatrix(n, curve, Z, u, v)
    return JacobiMatrix(n, curve, None, u, v)


def _factor_rows(entries):
    n = len(entries)
    cols = [[r[j] for r in entries] for j in range(n)]
    j0 = next((j for j in range(n) if k_linear_independent(cols[j])), None)
    if j0 is None:
        raise KGeneralityFailure("no column with k-independent entries")
    i0 = next(i for i in range(n) if entries[i][j0])
    piv = entries[i0][j0]
    return cols[j0], [e / piv for e in entries[i0]]


def abel_closed_form(u: Sequence[FuncElem], v: Sequence[FuncElem]) -> JacobiMatrix:
    """Materialize the factored Abel image of u v exactly (small n only)."""
    n = len(u)
    curve = u[0].curve
    one = MultiSlotElem.const(curve, 1)
    U = [[slot_embed(u[r], l + 1) for l in range(n)] for r in range(n)]
    V = [[slot_embed(v[c], l + 1) for c in range(n)] for l in range(n)]

    def col_swap(i, slot):
        return [[slot_embed(u[r], slot) if c == i else U[r][c] for c in range(n)] for r in range(n)]

    def row_swap(i, slot):
        return [[slot_embed(v[c], slot) for c in range(n)] if r == i else V[r] for r in range(n)]

    beta = [ring_det(col_swap(i, 0), one) for i in range(n)]
    gamma = [ring_det(col_swap(i, n + 1), one) for i in range(n)]
    alpha = [ring_det(row_swap(i, 0), one) for i in range(n)]
    delta = [ring_det(row_swap(i, n + 1), one) for i in range(n)]
    Z = [[beta[i] * delta[i] * alpha[j] * gamma[j] for j in range(n)] for i in range(n)]
    return JacobiMatrix(n, curve, Z, list(u), list(v))


def _sample_points(curve, ctx, rng, slots):
    return {s: ctx.random_point(curve, rng) for s in slots}


def _evaluate_retry(Z: JacobiMatrix, ctx, rng, slots, tries=20):
    for _ in range(tries):
        pts = _sample_points(Z.curve, ctx, rng, slots)
        try:
            return pts, Z.evaluate(ctx, pts)
        except ZeroDivisionError:
            continue
    raise ZeroDivisionError("could not find sample points avoiding every denominator")


def k_proportional(Z1: JacobiMatrix, Z2: JacobiMatrix, trials: int = 4, rng: random.Random | None = None) -> bool:
    """True iff Z2 = c Z1 for a nonzero scalar c.

    Materialized pairs are compared exactly.  Otherwise both are specialized
    at random curve points modulo a large prime; the ratio must agree across
    entries and across independent samples.
    """
    if Z1.n != Z2.n:
        return False
    n = Z1.n
    if Z1.materialized and Z2.materialized:
        return _exact_proportional(Z1.entries, Z2.entries)
    rng = rng or default_rng()
    ctx = modular_context(Z1.curve.field, rng)
    p = ctx.p
    ratio = None
    seen_nonzero = False
    slots = Z1.slots
    for _ in range(trials):
        pts = None
        for _attempt in range(20):
            pts = _sample_points(Z1.curve, ctx, rng, slots)
            try:
                a = Z1.evaluate(ctx, pts)
                b = Z2.evaluate(ctx, pts)
                break
            except ZeroDivisionError:
                continue
        else:
            raise ZeroDivisionError("could not find sample points avoiding every denominator")
        lead = next(((i, j) for i in range(n) for j in range(n) if a[i][j]), None)
        if lead is None:
            if any(b[i][j] for i in range(n) for j in range(n)):
                return False
            continue
        seen_nonzero = True
        i0, j0 = lead
        c = b[i0][j0] * pow(a[i0][j0], -1, p) % p
        if c == 0:
            return False
        if any((b[i][j] - c * a[i][j]) % p for i in range(n) for j in range(n)):
            return False
        if ratio is None:
            ratio = c
        elif ratio != c:
            return False
    return seen_nonzero


def _exact_proportional(A, B) -> bool:
    n = len(A)
    lead = next(((i, j) for i in range(n) for j in range(n) if A[i][j]), None)
    if lead is None:
        return False
    i0, j0 = lead
    a, b = A[i0][j0], B[i0][j0]
    if not b or a.slots != b.slots or a.dens != b.dens or set(a.terms) != set(b.terms):
        return False
    m = max(a.terms)
    c = b.terms[m] / a.terms[m]
    return all(B[i][j] == A[i][j] * c for i in range(n) for j in range(n))


# ---------------------------------------------------------------------------
# validation


@dataclass
class JacobiReport:
    level: str
    items: dict = field(default_factory=dict)  # item -> (status, detail)

    def set(self, item: int, status: str, detail: str = ""):
        self.items[item] = (status, detail)

    @property
    def ok(self) -> bool:
        gated = (1, 2, 3, 6)
        return all(self.items[i][0] != "fail" for i in gated if i in self.items)

    def __str__(self):
        lines = []
        for item in sorted(self.items):
            status, detail = self.items[item]
            lines.append(f"item {item}: {status}" + (f" ({detail})" if detail else ""))
        return "\n".join(lines)


def jacobi_validate(
    Z: JacobiMatrix,
    level: str = "core",
    G=None,
    universe=None,
    rng: random.Random | None = None,
) -> JacobiReport:
    """Check the Jacobi-matrix conditions.

    ``core`` checks items 1, 2, 3 and 6.  ``full`` adds items 4 and 5 under
    the SlotMap semantics (rename merges, permute relabels) and reports
    item 7 without evaluating it.
    """
    rep = JacobiReport(level)
    n = Z.n
    rng = rng or default_rng()
    allowed = set(Z.slots)

    # item 1: shape and slot support
    if Z.materialized:
        shape_ok = len(Z.entries) == n and all(len(r) == n for r in Z.entries)
        used = set()
        for r in Z.entries:
            for e in r:
                if isinstance(e, MultiSlotElem):
                    used |= set(e.slots)
        if shape_ok and used <= allowed:
            rep.set(1, "pass", f"slots used {sorted(used)}")
        else:
            rep.set(1, "fail", f"slots used {sorted(used)} outside {sorted(allowed)}")
    else:
        rep.set(1, "structural", f"factored over slots {sorted(allowed)}")

    # item 2: Z != 0
    if Z.materialized:
        nz = any(_nonzero(e) for r in Z.entries for e in r)
        rep.set(2, "pass" if nz else "fail", "" if nz else "every entry is zero")
    else:
        ctx = modular_context(Z.curve.field, rng)
        found = False
        for _ in range(4):
            try:
                _, vals = _evaluate_retry(Z, ctx, rng, Z.slots)
            except ZeroDivisionError:
                continue
            if any(v for r in vals for v in r):
                found = True
                break
        rep.set(2, "pass" if found else "fail", "nonzero value at a sample point" if found else "vanished at every sample")

    # item 3: Z_12 in the span of L L^(1) L^(2) (L^(3))^2 ... (L^(n))^2 L^(n+1)
    if n >= 2:
        if Z.materialized and G is not None and universe is not None:
            from .gform import in_lspace

            bad = None
            z12 = Z.entries[0][1]
            for slot in Z.slots:
                mult = 2 if 3 <= slot <= n else 1
                for fn in z12.slot_part_functions(slot) if isinstance(z12, MultiSlotElem) else []:
                    if not in_lspace(fn, G * mult, universe):
                        bad = slot
                        break
                if bad is not None:
                    break
            if bad is None:
                rep.set(3, "pass", "per-slot pole bounds hold")
            else:
                rep.set(3, "fail", f"slot {bad} exceeds its pole bound")
        elif Z.u is not None and G is not None and universe is not None:
            from .gform import in_lspace

            # every slot factor is a product of entries u_a v_b, each in L(G)
            ok = all(in_lspace(a * b, G, universe) for a in Z.u for b in Z.v)
            rep.set(3, "structural" if ok else "fail", "factor products lie in L(G)")
        else:
            rep.set(3, "skipped", "no divisor data supplied")

    # item 6: the leading 2 x 2 determinant vanishes
    if n >= 2:
        if Z.materialized:
            e = Z.entries
            m = e[0][0] * e[1][1] - e[0][1] * e[1][0]
            zero = not _nonzero(m)
            rep.set(6, "pass" if zero else "fail", "exact")
        else:
            ctx = modular_context(Z.curve.field, rng)
            _, vals = _evaluate_retry(Z, ctx, rng, Z.slots)
            m = (vals[0][0] * vals[1][1] - vals[0][1] * vals[1][0]) % ctx.p
            rep.set(6, "structural" if m == 0 else "fail", "rank-one factored form")

    if level == "full" and n >= 2:
        _full_items(Z, rep, rng)
    return rep


def _nonzero(e) -> bool:
    return bool(e)


def _full_items(Z: JacobiMatrix, rep: JacobiReport, rng):
    n = Z.n
    rename = SlotMap("rename", ((1, 2),))
    derangements = [
        perm
        for perm in itertools.permutations(range(1, n + 1))
        if all(perm[i] != i + 1 for i in range(n))
    ]
    if Z.materialized:
        ok4 = rename.apply(Z.entries[0][1]) == Z.entries[0][0]
        ok5 = True
        for perm in derangements:
            pm = SlotMap("permute", tuple((i + 1, perm[i]) for i in range(n)))
            for i in range(n):
                for j in range(n):
                    if pm.apply(Z.entries[i][j]) != Z.entries[perm[i] - 1][perm[j] - 1]:
                        ok5 = False
        rep.set(4, "pass" if ok4 else "fail", "[1->2] renames and merges slots")
        rep.set(5, "pass" if ok5 else "fail", f"{len(derangements)} derangements")
    else:
        ctx = modular_context(Z.curve.field, rng)
        pts, vals = _evaluate_retry(Z, ctx, rng, Z.slots)
        pulled = rename.pull_points(pts)
        ok4 = Z.evaluate(ctx, pulled)[0][1] == vals[0][0]
        ok5 = True
        for perm in derangements:
            pm = SlotMap("permute", tuple((i + 1, perm[i]) for i in range(n)))
            pv = Z.evaluate(ctx, pm.pull_points(pts))
            if any(pv[i][j] != vals[perm[i] - 1][perm[j] - 1] for i in range(n) for j in range(n)):
                ok5 = False
                break
        rep.set(4, "pass" if ok4 else "fail", "sampled modulo p")
        rep.set(5, "pass" if ok5 else "fail", f"{len(derangements)} derangements, sampled modulo p")
    rep.set(7, "reported", "the bar operator is not fixed by the defining data; identity not evaluated")


# ---------------------------------------------------------------------------
# text form


def _slot_of(name: str, lineno):
    from .errors import SpecError

    if len(name) < 2 or name[0] not in "xy" or not name[1:].isdigit():
        raise SpecError(f"line {lineno}: unknown name {name!r}; expected x<slot> or y<slot>")
    return int(name[1:])


def parse_multislot(text: str, curve: Curve, lineno: int | None = None) -> MultiSlotElem:
    """Inverse of ``MultiSlotElem.to_text`` ("num | den")."""
    import ast

    from .errors import SpecError
    from .specfile import eval_expr

    num, bar, den = text.partition("|")
    if not bar:
        raise SpecError(f"line {lineno}: entry must read 'num | den'")
    names = {}
    try:
        tree = ast.parse(num.strip().replace("^", "**"), mode="eval")
    except SyntaxError:
        raise SpecError(f"line {lineno}: cannot parse {num.strip()!r}") from None
    for node in ast.walk(tree):
        if isinstance(node, ast.Name) and node.id not in names and node.id != curve.field.name:
            s = _slot_of(node.id, lineno)
            base = curve.x() if node.id[0] == "x" else curve.y()
            names[node.id] = slot_embed(base, s)
    names[curve.field.name] = curve.field.gen
    val = eval_expr(num.strip(), names, lineno)
    if not isinstance(val, MultiSlotElem):
        val = MultiSlotElem.const(curve, val)
    den = den.strip()
    if den == "1":
        return val
    try:
        dtree = ast.parse(den.replace("^", "**"), mode="eval").body
    except SyntaxError:
        raise SpecError(f"line {lineno}: cannot parse {den!r}") from None
    factors = []

    def split(node):
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
            split(node.left)
            split(node.right)
        else:
            factors.append(node)

    split(dtree)
    K = curve.field
    for node in factors:
        used = {n.id for n in ast.walk(node) if isinstance(n, ast.Name)} - {K.name}
        if len(used) != 1 or next(iter(used))[0] != "x":
            raise SpecError(f"line {lineno}: each denominator factor must be a polynomial in one x<slot>")
        var = next(iter(used))
        s = _slot_of(var, lineno)
        q = eval_expr(ast.unparse(node), {var: Poly.x(K), K.name: Poly.const(K, K.gen)}, lineno)
        val = _divide_slot(val, s, q)
    return val


def _divide_slot(e: MultiSlotElem, slot: int, q: Poly) -> MultiSlotElem:
    lc = q.lc()
    slots = tuple(sorted(set(e.slots) | {slot}))
    terms, dens = _reindex(e, slots)
    i = slots.index(slot)
    dens[i] = dens[i] * q.monic()
    return _normalize(e.curve, slots, terms, dens) * lc.inverse()


def jacobi_from_text(text: str, curve: Curve) -> JacobiMatrix:
    from .errors import SpecError

    n = None
    cells = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise SpecError(f"line {lineno}: expected 'key = value'")
        key, val = key.strip(), val.strip()
        if key == "n":
            n = int(val)
        elif key == "slots":
            continue
        elif key.startswith("Z[") and key.endswith("]"):
            try:
                i, j = (int(s) for s in key[2:-1].split(","))
            except ValueError:
                raise SpecError(f"line {lineno}: bad index {key}") from None
            cells[(i - 1, j - 1)] = parse_multislot(val, curve, lineno)
        else:
            raise SpecError(f"line {lineno}: unknown key {key!r}")
    if n is None:
        raise SpecError("Jacobi matrix file needs an 'n =' line")
    try:
        entries = [[cells[(i, j)] for j in range(n)] for i in range(n)]
    except KeyError as exc:
        i, j = exc.args[0]
        raise SpecError(f"missing entry Z[{i + 1},{j + 1}]") from None
    return JacobiMatrix(n, curve, entries)
