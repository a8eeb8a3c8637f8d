"""Function field of a superelliptic curve y^d = f(x).

An element is stored as (p_0(x) + p_1(x) y + ... + p_{d-1}(x) y^{d-1}) / q(x)
with q monic and gcd(q, p_0, ..., p_{d-1}) = 1.  Because k[x][y]/(y^d - f)
is free over k[x] on 1, y, ..., y^{d-1}, this form is unique and equality
is structural.
"""
from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import gcd

from .basefield import FieldScalar, NumberField
from .errors import NonInvertible, SpecError, ZeroDenominator
from .poly import Poly

__all__ = [
    "Curve",
    "FuncElem",
    "KEchelon",
    "express_in",
    "k_linear_independent",
    "same_span",
]


class Curve:
    """The affine curve y^d = f(x) over a NumberField."""

    def __init__(self, field: NumberField, d: int, f: Poly | Sequence, genus: int | None = None):
        if d < 2:
            raise SpecError("y-degree must be at least 2")
        self.field = field
        self.d = d
        self.f = f if isinstance(f, Poly) else Poly(field, f)
        if self.f.degree < 1:
            raise SpecError("f must be nonconstant")
        if self.f.gcd(self.f.derivative()).degree > 0:
            raise SpecError("f is not squarefree; the affine model is singular")
        m = self.f.degree
        computed = ((d - 1) * (m - 1) + 1 - gcd(d, m)) // 2
        if genus is not None and genus != computed:
            raise SpecError(f"declared genus {genus} disagrees with computed genus {computed}")
        self.genus = computed
        self.m = m
        # f^j for j < d is never needed; powers of f appear only through y-reduction
        self._zero = Poly(field)
        self._one = Poly.const(field, 1)

    def __repr__(self):
        return f"Curve(y^{self.d} = {self.f})"

    def __eq__(self, other):
        return (
            isinstance(other, Curve)
            and self.field == other.field
            and self.d == other.d
            and self.f == other.f
        )

    def __hash__(self):
        return hash((self.d, self.f))

    # element constructors ------------------------------------------------
    def const(self, c) -> FuncElem:
        return FuncElem._raw(self, (Poly.const(self.field, c),) + (self._zero,) * (self.d - 1), self._one)

    def x(self) -> FuncElem:
        return FuncElem._raw(self, (Poly.x(self.field),) + (self._zero,) * (self.d - 1), self._one)

    def y(self) -> FuncElem:
        nums = [self._zero] * self.d
        nums[1] = self._one
        return FuncElem._raw(self, tuple(nums), self._one)

    def zero(self) -> FuncElem:
        return FuncElem._raw(self, (self._zero,) * self.d, self._one)

    def one(self) -> FuncElem:
        return self.const(1)

    def element(self, nums: Sequence, den=None) -> FuncElem:
        """Build and normalize from a list of y-coefficient polynomials.

        ``nums`` may be longer than d; higher powers of y are reduced.
        """
        K = self.field
        polys = [p if isinstance(p, Poly) else Poly(K, p) for p in nums]
        den = self._one if den is None else (den if isinstance(den, Poly) else Poly(K, den))
        return FuncElem.normalized(self, self._reduce_y(polys), den)

    def _reduce_y(self, polys):
        d = self.d
        out = list(polys[:d]) + [self._zero] * max(0, d - len(polys))
        if len(polys) > d:
            fpow = self.f
            for start in range(d, len(polys), d):
                for j in range(d):
                    if start + j < len(polys) and polys[start + j]:
                        out[j] = out[j] + polys[start + j] * fpow
                fpow = fpow * self.f
        return out


class FuncElem:
    """Canonical element of the function field of a Curve."""

    __slots__ = ("_hash", "curve", "den", "nums")

    def __init__(self, curve: Curve, nums, den=None):
        fe = curve.element(nums, den)
        self.curve, self.nums, self.den, self._hash = fe.curve, fe.nums, fe.den, None

    @classmethod
    def _raw(cls, curve, nums, den):
        e = object.__new__(cls)
        e.curve = curve
        e.nums = nums
        e.den = den
        e._hash = None
        return e

    @classmethod
    def normalized(cls, curve: Curve, nums, den: Poly) -> FuncElem:
        if not den:
            raise ZeroDenominator("function-field element with zero denominator")
        if not any(nums):
            return curve.zero()
        if den.degree > 0:
            g = den
            for p in nums:
                if p:
                    g = g.gcd(p)
                    if g.degree == 0:
                        break
            if g.degree > 0:
                den = den.exact_div(g)
                nums = [p.exact_div(g) if p else p for p in nums]
        lc = den.lc()
        if lc != 1:
            inv = lc.inverse()
            den = den * inv
            nums = [p * inv for p in nums]
        return cls._raw(curve, tuple(nums), den)

    # predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self):
        return not self.is_zero()

    def is_const(self) -> bool:
        return self.den.degree == 0 and self.nums[0].degree <= 0 and not any(self.nums[1:])

    def const_value(self) -> FieldScalar:
        if not self.is_const():
            raise ValueError("element is not constant")
        return self.nums[0].coeff(0)

    def y_degree(self) -> int:
        for j in range(len(self.nums) - 1, -1, -1):
            if self.nums[j]:
                return j
        return -1

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FuncElem):
            return other
        if isinstance(other, (int, Fraction, FieldScalar)):
            return self.curve.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            nums = [a + b for a, b in zip(self.nums, other.nums)]
            return FuncElem.normalized(self.curve, nums, self.den)
        L = self.den.lcm(other.den)
        ma = L.exact_div(self.den)
        mb = L.exact_div(other.den)
        nums = [a * ma + b * mb for a, b in zip(self.nums, other.nums)]
        return FuncElem.normalized(self.curve, nums, L)

    __radd__ = __add__

    def __neg__(self):
        return FuncElem._raw(self.curve, tuple(-p for p in self.nums), self.den)

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
            s = self.curve.field(other)
            if not s:
                return self.curve.zero()
            return FuncElem._raw(self.curve, tuple(p * s for p in self.nums), self.den)
        if not isinstance(other, FuncElem):
            return NotImplemented
        d = self.curve.d
        prod = [self.curve._zero] * (2 * d - 1)
        for i, a in enumerate(self.nums):
            if a:
                for j, b in enumerate(other.nums):
                    if b:
                        prod[i + j] = prod[i + j] + a * b
        f = self.curve.f
        nums = prod[:d]
        for j in range(d, 2 * d - 1):
            if prod[j]:
                nums[j - d] = nums[j - d] + prod[j] * f
        return FuncElem.normalized(self.curve, nums, self.den * other.den)

    __rmul__ = __mul__

    def mult_matrix(self):
        """Matrix over k[x] of multiplication by the numerator, basis y^j."""
        d = self.curve.d
        f = self.curve.f
        cols = []
        for j in range(d):
            col = [self.curve._zero] * d
            for i, a in enumerate(self.nums):
                if a:
                    k = i + j
                    col[k % d] = col[k % d] + (a * f if k >= d else a)
            cols.append(col)
        return [[cols[c][r] for c in range(d)] for r in range(d)]

    def norm(self) -> Poly:
        """Norm of the numerator down to k[x] (det of the multiplication matrix)."""
        return _poly_det(self.mult_matrix())

    def inverse(self) -> FuncElem:
        if self.is_zero():
            raise ZeroDenominator("inverse of zero function")
        M = self.mult_matrix()
        N = _poly_det(M)
        if not N:
            raise NonInvertible("numerator norm vanishes; y^d - f(x) is reducible")
        d = self.curve.d
        # first column of adj(M): adj[r][0] = (-1)^r det(M without row 0 and column r)
        adj_col = []
        for r in range(d):
            minor = [[M[i][j] for j in range(d) if j != r] for i in range(1, d)]
            c = _poly_det(minor) if minor else Poly.const(self.curve.field, 1)
            adj_col.append(-c if r % 2 else c)
        nums = [p * self.den for p in adj_col]
        return FuncElem.normalized(self.curve, nums, N)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.curve.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FuncElem):
            return self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction, FieldScalar)):
            return self == self.curve.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nums, self.den))
        return self._hash

    # evaluation ----------------------------------------------------------
    def eval_at(self, x0, y0) -> FieldScalar:
        """Value at an affine point where the denominator does not vanish."""
        q = self.den(x0)
        if not q:
            raise ZeroDenominator("denominator vanishes at the evaluation point")
        acc = self.curve.field.zero
        for p in reversed(self.nums):
            acc = acc * y0 + p(x0)
        return acc / q

    # printing ------------------------------------------------------------
    def num_str(self) -> str:
        parts = []
        for j in range(len(self.nums) - 1, -1, -1):
            p = self.nums[j]
            if not p:
                continue
            ymon = "" if j == 0 else ("y" if j == 1 else f"y^{j}")
            for k in range(p.degree, -1, -1):
                c = p.c[k]
                if not c:
                    continue
                xmon = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
                mon = "*".join(m for m in (xmon, ymon) if m)
                parts.append(_signed(c, mon))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def to_text(self) -> str:
        """``num | den`` canonical text used by the serializers."""
        return f"{self.num_str()} | {self.den.to_str('x')}"

    def __str__(self):
        if self.den.degree == 0:
            return self.num_str()
        return f"({self.num_str()})/({self.den.to_str('x')})"

    def __repr__(self):
        return f"FuncElem({self})"


def _signed(c: FieldScalar, mon: str):
    if c.is_rational():
        q = c.to_fraction()
        neg = q < 0
        s = str(abs(q))
        if mon:
            s = mon if s == "1" else f"{s}*{mon}"
        return ("-" if neg else "+", s)
    s = str(c)
    return ("+", f"{s}*{mon}" if mon else s)


def _poly_det(M):
    """Determinant of a small square matrix of Polys (Laplace over column subsets)."""
    n = len(M)
    if n == 0:
        return None
    K = M[0][0].K
    # dp[mask] = det of the submatrix with the first popcount(mask) rows and columns in mask
    dp = {0: Poly.const(K, 1)}
    for r in range(n):
        nxt = {}
        for mask, val in dp.items():
            if not val:
                continue
            for c in range(n):
                if mask >> c & 1 or not M[r][c]:
                    continue
                # sign = (-1)^(number of chosen columns greater than c)
                higher = (mask >> (c + 1)).bit_count()
                term = val * M[r][c]
                if higher & 1:
                    term = -term
                key = mask | (1 << c)
                nxt[key] = nxt[key] + term if key in nxt else term
        dp = nxt
    return dp.get((1 << n) - 1, Poly(K))


# ---------------------------------------------------------------------------
# k-linear algebra on lists of function-field elements


def _coord_vectors(fs: Sequence[FuncElem], L: Poly | None = None):
    """Coefficient vectors of the numerators over a common denominator L."""
    if L is None:
        L = Poly.const(fs[0].curve.field, 1)
        for e in fs:
            L = L.lcm(e.den)
    vecs = []
    for e in fs:
        scaled = L.exact_div(e.den)
        vec = {}
        for j, p in enumerate(e.nums):
            if p:
                q = p * scaled
                for k, c in enumerate(q.c):
                    if c:
                        vec[(j, k)] = c
        vecs.append(vec)
    return vecs, L


class KEchelon:
    """Incremental row echelon form over k for sparse coordinate vectors.

    Vectors are dicts from a sortable key to FieldScalar.  ``add`` returns
    True when the vector is independent of those already stored.
    """

    def __init__(self):
        self.rows = {}  # pivot key -> row normalized to 1 at the pivot

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = dict(vec)
        while v:
            key = max(v)
            row = self.rows.get(key)
            if row is None:
                return v
            c = v[key]
            for k2, a in row.items():
                nv = v.get(k2)
                nv = -(c * a) if nv is None else nv - c * a
                if nv:
                    v[k2] = nv
                else:
                    v.pop(k2, None)
        return v

    def add(self, vec: dict) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        key = max(v)
        inv = v[key].inverse()
        self.rows[key] = {k: a * inv for k, a in v.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def k_linear_independent(fs: Sequence[FuncElem]) -> bool:
    """True iff no nontrivial k-linear combination of ``fs`` vanishes."""
    fs = list(fs)
    if not fs:
        return True
    if any(e.is_zero() for e in fs):
        return False
    vecs, _ = _coord_vectors(fs)
    ech = KEchelon()
    return all(ech.add(v) for v in vecs)


def k_rank(fs: Sequence[FuncElem]) -> int:
    fs = [e for e in fs if not e.is_zero()]
    if not fs:
        return 0
    vecs, _ = _coord_vectors(fs)
    ech = KEchelon()
    for v in vecs:
        ech.add(v)
    return len(ech)


def same_span(a: Sequence[FuncElem], b: Sequence[FuncElem]) -> bool:
    """Mutual k-linear expressibility of two lists."""
    ra, rb = k_rank(a), k_rank(b)
    return ra == rb == k_rank(list(a) + list(b))


def express_in(target: FuncElem, basis: Sequence[FuncElem]):
    """Coefficients c with target = sum c_i basis_i, or None if not in the span."""
    from .linalg import solve_vector

    fs = list(basis) + [target]
    vecs, _ = _coord_vectors(fs)
    keys = sorted(set().union(*vecs))
    K = target.curve.field
    A = [[vecs[i].get(k, K.zero) for i in range(len(basis))] for k in keys]
    rhs = [vecs[-1].get(k, K.zero) for k in keys]
    return solve_vector(K, A, rhs)
