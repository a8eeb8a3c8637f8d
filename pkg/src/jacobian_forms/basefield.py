"""Exact arithmetic in a simple algebraic extension k = Q[t]/(m(t)).

Elements are stored as integer numerators over one positive common
denominator, which keeps the hot multiply/add paths in plain ``int``
arithmetic.  Everything is immutable and canonical, so ``==`` and ``hash``
are structural.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
from math import gcd, isqrt

from .errors import DivisionByZero, SpecError

__all__ = ["QQ", "FieldScalar", "NumberField"]


def _normalize(nums, den):
    if den < 0:
        nums = [-a for a in nums]
        den = -den
    g = den
    for a in nums:
        if a:
            g = gcd(g, a)
            if g == 1:
                break
    if g != 1:
        nums = [a // g for a in nums]
        den //= g
    return tuple(nums), den


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _has_rational_root(coeffs: Sequence[Fraction]) -> bool:
    from sympy import divisors

    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    if ints[0] == 0:
        return True
    for p in divisors(abs(ints[0])):
        for q in divisors(abs(ints[-1])):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    return True
    return False


class NumberField:
    """The field Q[t]/(m(t)) for a monic irreducible ``m``.

    ``min_poly`` lists the coefficients of m from the constant term up.
    Irreducibility is verified for degree <= 3; above that the field is
    accepted with ``irreducibility_checked = False``.
    """

    def __init__(self, min_poly: Sequence, name: str = "t"):
        coeffs = [Fraction(c) for c in min_poly]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise SpecError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise SpecError("minimal polynomial must be monic")
        self.min_poly = tuple(coeffs)
        self.degree = deg = len(coeffs) - 1
        self.name = name

        self.irreducibility_checked = deg <= 3
        if deg == 2:
            b, a = coeffs[1], coeffs[0]
            if _is_rational_square(b * b - 4 * a):
                raise SpecError("minimal polynomial is reducible over Q")
        elif deg == 3 and _has_rational_root(coeffs):
            raise SpecError("minimal polynomial is reducible over Q")

        # t^k mod m for deg <= k <= 2*deg - 2, scaled to a common integer denominator
        red = []
        cur = [Fraction(0)] * deg
        cur_full = [-c for c in coeffs[:-1]]  # t^deg
        for k in range(deg, 2 * deg - 1):
            if k == deg:
                cur = cur_full
            else:
                top = cur[-1]
                cur = [Fraction(0)] + cur[:-1]
                cur = [a + top * b for a, b in zip(cur, cur_full)]
            red.append(cur)
        rden = 1
        for row in red:
            for c in row:
                rden = rden * c.denominator // gcd(rden, c.denominator)
        self._red = [tuple(int(c * rden) for c in row) for row in red]
        self._rden = rden
        self._zero_nums = (0,) * deg

        self.zero = FieldScalar(self, self._zero_nums, 1)
        self.one = self(1)
        self.gen = self([0, 1]) if deg > 1 else self(-coeffs[0])

    # construction -----------------------------------------------------
    def __call__(self, value) -> FieldScalar:
        if isinstance(value, FieldScalar):
            if value.field is not self:
                if value.field == self:
                    return FieldScalar(self, value.nums, value.den)
                raise SpecError("scalar belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)):
            q = Fraction(value)
            nums = [0] * self.degree
            nums[0] = q.numerator
            return FieldScalar(self, tuple(nums), q.denominator)
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        raise TypeError(f"cannot convert {value!r} to a field element")

    def from_coeffs(self, coeffs: Iterable) -> FieldScalar:
        qs = [Fraction(c) for c in coeffs]
        if len(qs) > self.degree:
            # reduce an over-long coefficient list modulo m
            acc = self.zero
            power = self.one
            for q in qs:
                acc = acc + power * q
                power = power * self.gen
            return acc
        qs += [Fraction(0)] * (self.degree - len(qs))
        den = 1
        for q in qs:
            den = den * q.denominator // gcd(den, q.denominator)
        nums, den = _normalize([int(q * den) for q in qs], den)
        return FieldScalar(self, nums, den)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({self.poly_str()})"

    def poly_str(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.min_poly[k]
            if c == 0:
                continue
            mon = "" if k == 0 else (self.name if k == 1 else f"{self.name}^{k}")
            if mon and c in (1, -1):
                s = mon
            elif mon:
                s = f"{abs(c)}*{mon}"
            else:
                s = str(abs(c))
            terms.append(("-" if c < 0 else "+", s))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, s in terms[1:]:
            out += f" {sign} {s}"
        return out


class FieldScalar:
    """Immutable element c0 + c1 t + ... of a NumberField."""

    __slots__ = ("den", "field", "nums")

    def __init__(self, field: NumberField, nums: tuple, den: int):
        self.field = field
        self.nums = nums
        self.den = den

    # helpers -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(a, self.den) for a in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("scalar is not rational")
        return Fraction(self.nums[0], self.den)

    def __bool__(self):
        return any(self.nums)

    # arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d1, d2 = self.den, other.den
        if d1 == d2:
            nums, den = _normalize([a + b for a, b in zip(self.nums, other.nums)], d1)
        else:
            nums, den = _normalize([a * d2 + b * d1 for a, b in zip(self.nums, other.nums)], d1 * d2)
        return FieldScalar(self.field, nums, den)

    __radd__ = __add__

    def __neg__(self):
        return FieldScalar(self.field, tuple(-a for a in self.nums), self.den)

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
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        deg = F.degree
        if deg == 1:
            nums, den = _normalize([self.nums[0] * other.nums[0]], self.den * other.den)
            return FieldScalar(F, nums, den)
        a, b = self.nums, other.nums
        conv = [0] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        rden = F._rden
        if rden == 1:
            res = conv[:deg]
        else:
            res = [c * rden for c in conv[:deg]]
        for k, c in enumerate(conv[deg:]):
            if c:
                row = F._red[k]
                for i in range(deg):
                    if row[i]:
                        res[i] += c * row[i]
        nums, den = _normalize(res, self.den * other.den * rden)
        return FieldScalar(F, nums, den)

    __rmul__ = __mul__

    def inverse(self) -> FieldScalar:
        if self.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        F = self.field
        deg = F.degree
        if deg == 1:
            return FieldScalar(F, *_normalize([self.den], self.nums[0]))
        # Solve (mult-by-self) c = e0 over Q.
        cols = []
        basis = F.one
        for _ in range(deg):
            cols.append((self * basis).coeffs)
            basis = basis * F.gen
        m = [[cols[j][i] for j in range(deg)] + [Fraction(int(i == 0))] for i in range(deg)]
        for c in range(deg):
            piv = next(r for r in range(c, deg) if m[r][c] != 0)
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [v * inv for v in m[c]]
            for r in range(deg):
                if r != c and m[r][c] != 0:
                    f = m[r][c]
                    m[r] = [v - f * w for v, w in zip(m[r], m[c])]
        return F.from_coeffs([m[i][deg] for i in range(deg)])

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
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.nums == other.nums and self.den == other.den
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return (
                self.is_rational()
                and self.nums[0] == q.numerator
                and self.den == q.denominator
            )
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.nums[0], self.den))
        return hash((self.nums, self.den))

    # printing ----------------------------------------------------------
    def __str__(self):
        name = self.field.name
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
            if not mon:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mon
            else:
                s = f"{abs(c)}*{mon}"
            parts.append(("-" if c < 0 else "+", s))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        if len(parts) > 1:
            out = f"({out})"
        return out

    def __repr__(self):
        return f"FieldScalar({self})"


QQ = NumberField([0, 1])
