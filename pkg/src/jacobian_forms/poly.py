"""Dense univariate polynomials over a NumberField."""
from __future__ import annotations

from fractions import Fraction

from .basefield import FieldScalar, NumberField
from .errors import DivisionByZero

__all__ = ["Poly"]


def _strip(cs):
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return tuple(cs[:n])


class Poly:
    """Polynomial with FieldScalar coefficients, lowest degree first."""

    __slots__ = ("K", "c")

    def __init__(self, K: NumberField, coeffs=()):
        self.K = K
        self.c = _strip([K(a) for a in coeffs])

    @classmethod
    def _raw(cls, K, cs):
        p = object.__new__(cls)
        p.K = K
        p.c = cs
        return p

    @classmethod
    def const(cls, K, a) -> Poly:
        return cls(K, [a])

    @classmethod
    def x(cls, K) -> Poly:
        return cls._raw(K, (K.zero, K.one))

    @classmethod
    def from_roots(cls, K, roots) -> Poly:
        p = cls.const(K, 1)
        for r in roots:
            p = p * cls._raw(K, _strip((-K(r), K.one)))
        return p

    # basic properties --------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def lc(self) -> FieldScalar:
        return self.c[-1] if self.c else self.K.zero

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def coeff(self, k: int) -> FieldScalar:
        return self.c[k] if 0 <= k < len(self.c) else self.K.zero

    # arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, FieldScalar)):
            return Poly.const(self.K, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = out[i] + v
        return Poly._raw(self.K, _strip(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.K, tuple(-v for v in self.c))

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
            s = self.K(other)
            if not s:
                return Poly._raw(self.K, ())
            return Poly._raw(self.K, tuple(v * s for v in self.c))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw(self.K, ())
        if len(a) == 1:
            return other * a[0]
        if len(b) == 1:
            return self * b[0]
        out = [self.K.zero] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    if v:
                        out[i + j] = out[i + j] + u * v
        return Poly._raw(self.K, _strip(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.K, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: Poly):
        if not other.c:
            raise DivisionByZero("polynomial division by zero")
        K = self.K
        r = list(self.c)
        db = other.degree
        inv = other.c[-1].inverse()
        if len(r) - 1 < db:
            return Poly._raw(K, ()), self
        q = [K.zero] * (len(r) - db)
        bc = other.c
        for k in range(len(r) - 1 - db, -1, -1):
            coef = r[k + db]
            if coef:
                coef = coef * inv
                q[k] = coef
                for j in range(db + 1):
                    if bc[j]:
                        r[k + j] = r[k + j] - coef * bc[j]
        return Poly._raw(K, _strip(q)), Poly._raw(K, _strip(r[:db]))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> Poly:
        if not self.c:
            return self
        lc = self.c[-1]
        if lc == 1:
            return self
        return self * lc.inverse()

    def gcd(self, other: Poly) -> Poly:
        a, b = self, other
        while b.c:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def lcm(self, other: Poly) -> Poly:
        if not self.c or not other.c:
            return Poly._raw(self.K, ())
        g = self.gcd(other)
        return (self.exact_div(g) * other).monic()

    def derivative(self) -> Poly:
        return Poly._raw(self.K, _strip([v * k for k, v in enumerate(self.c)][1:]))

    def __call__(self, x):
        acc = self.K.zero
        for v in reversed(self.c):
            acc = acc * x + v
        return acc

    def taylor_shift(self, a) -> Poly:
        """Coefficients of p(a + X) as a polynomial in X."""
        a = self.K(a)
        c = list(self.c)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] = c[j] + a * c[j + 1]
        return Poly._raw(self.K, _strip(c))

    def reverse(self, n: int | None = None) -> Poly:
        """X^n p(1/X); ``n`` defaults to the degree."""
        if n is None:
            n = self.degree
        cs = list(self.c) + [self.K.zero] * (n + 1 - len(self.c))
        return Poly._raw(self.K, _strip(cs[::-1]))

    # comparison / printing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction, FieldScalar)):
            return self.c == Poly.const(self.K, other).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def to_str(self, var: str = "x") -> str:
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            v = self.c[k]
            if not v:
                continue
            mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(_term(v, mon))
        return _join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self})"


def _term(v: FieldScalar, mon: str):
    """Signed term for printing: (sign, body)."""
    s = str(v)
    neg = False
    if v.is_rational():
        q = v.to_fraction()
        neg = q < 0
        s = str(abs(q))
        if mon and s == "1":
            return ("-" if neg else "+", mon)
    if not mon:
        return ("-" if neg else "+", s)
    return ("-" if neg else "+", f"{s}*{mon}")


def _join(parts):
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out
