"""Points, uniformizers, Laurent expansions, valuations and residues.

Three kinds of place are handled:

* affine with y0 != 0: uniformizer x - x0, y expanded by Newton iteration
  on T^d = f(x0 + tau);
* affine with y0 == 0: uniformizer y, x = x0 + U where f(x0 + U) = tau^d;
* infinity: with e = gcd(d, m), d' = d/e, m' = m/e we set x = tau^(-d') and
  y = tau^(-m') R(tau) where R^d = f*(tau^d'), f*(s) = s^m f(1/s) and
  R(0) = zeta.  When d divides m this is the chart s = 1/x, r = y/x^(m/d).

All coefficients are exact FieldScalars.  Expansions start at
``INITIAL_PRECISION`` terms and double until resolved or until the cap.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from math import gcd

from .basefield import FieldScalar
from .errors import PrecisionExhausted, SingularPoint, SpecError
from .funcfield import Curve, FuncElem
from .poly import Poly

__all__ = [
    "INITIAL_PRECISION",
    "CurvePoint",
    "LaurentSeries",
    "affine_point",
    "expand_at",
    "get_precision_cap",
    "infinity_point",
    "ord_at",
    "residue_at",
    "set_precision_cap",
    "uniformizer_at",
]

INITIAL_PRECISION = 8
_PRECISION_CAP = 512


def set_precision_cap(n: int) -> None:
    global _PRECISION_CAP
    if n < INITIAL_PRECISION:
        raise ValueError(f"precision cap must be at least {INITIAL_PRECISION}")
    _PRECISION_CAP = n


def get_precision_cap() -> int:
    return _PRECISION_CAP


@dataclass(frozen=True)
class CurvePoint:
    """A place of the curve.  Equality ignores the label."""

    chart: str  # "affine" or "infinity"
    coords: tuple
    label: str | None = field(default=None, compare=False)

    def __str__(self):
        if self.label:
            return self.label
        if self.chart == "affine":
            return f"({self.coords[0]}, {self.coords[1]})"
        return f"inf[{self.coords[0]}]"

    def sort_key(self):
        return (self.label or "", self.chart, tuple(str(c) for c in self.coords))


def affine_point(curve: Curve, x0, y0, label: str | None = None) -> CurvePoint:
    K = curve.field
    x0, y0 = K(x0), K(y0)
    if y0 ** curve.d != curve.f(x0):
        raise SpecError(f"point {label or (x0, y0)} is not on the curve")
    return CurvePoint("affine", (x0, y0), label)


def infinity_point(curve: Curve, zeta, label: str | None = None) -> CurvePoint:
    K = curve.field
    zeta = K(zeta)
    if zeta ** curve.d != curve.f.lc():
        raise SpecError(f"point {label or zeta} at infinity: zeta^d must equal the leading coefficient of f")
    return CurvePoint("infinity", (zeta,), label)


def infinity_place_count(curve: Curve) -> int:
    return gcd(curve.d, curve.m)


# ---------------------------------------------------------------------------
# truncated power series helpers (lists of FieldScalar, index = exponent)


def _ps_mul(a, b, N, K):
    out = [K.zero] * N
    for i, x in enumerate(a[:N]):
        if x:
            lim = min(len(b), N - i)
            for j in range(lim):
                y = b[j]
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def _ps_inv(a, N, K):
    inv0 = a[0].inverse()
    out = [inv0] + [K.zero] * (N - 1)
    for n in range(1, N):
        acc = K.zero
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k] and out[n - k]:
                acc = acc + a[k] * out[n - k]
        out[n] = -(acc * inv0)
    return out


def _ps_pow(a, e, N, K):
    result = [K.one] + [K.zero] * (N - 1)
    base = a
    while e:
        if e & 1:
            result = _ps_mul(result, base, N, K)
        e >>= 1
        if e:
            base = _ps_mul(base, base, N, K)
    return result


def _ps_eval_poly(coeffs, a, N, K):
    """sum coeffs[k] a^k mod tau^N by Horner."""
    out = [K.zero] * N
    for c in reversed(coeffs):
        out = _ps_mul(out, a, N, K)
        out[0] = out[0] + c
    return out


def _newton_root(c0, F, d, N, K):
    """Power series T with T^d = F and T(0) = c0, to N terms."""
    T = [c0]
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        T = T + [K.zero] * (prec - len(T))
        Td1 = _ps_pow(T, d - 1, prec, K)
        Td = _ps_mul(Td1, T, prec, K)
        resid = [Td[i] - (F[i] if i < len(F) else K.zero) for i in range(prec)]
        step = _ps_mul(resid, _ps_inv([v * d for v in Td1], prec, K), prec, K)
        T = [a - b for a, b in zip(T, step)]
    return T[:N]


def _newton_inverse_fn(Fc, d, N, K):
    """Power series U with U(0) = 0 and sum Fc[k] U^k = tau^d (Fc[1] != 0)."""
    dF = [Fc[k] * k for k in range(1, len(Fc))]
    U = [K.zero]
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        U = U + [K.zero] * (prec - len(U))
        val = _ps_eval_poly(Fc, U, prec, K)
        if d < prec:
            val[d] = val[d] - K.one
        der = _ps_eval_poly(dF, U, prec, K)
        step = _ps_mul(val, _ps_inv(der, prec, K), prec, K)
        U = [a - b for a, b in zip(U, step)]
    return U[:N]


# ---------------------------------------------------------------------------


class LaurentSeries:
    """Truncated Laurent series sum_{i} coeffs[i] tau^(valuation + i).

    ``end`` is the absolute precision: the series is known modulo tau^end.
    ``end is None`` marks an exact (finite) series.  Leading zeros are
    stripped, so the first coefficient is nonzero unless the series is zero
    to the stated precision.
    """

    __slots__ = ("K", "coeffs", "end", "valuation")

    def __init__(self, K, valuation: int, coeffs: Sequence[FieldScalar], end: int | None = None):
        coeffs = list(coeffs)
        if end is not None:
            n = max(0, end - valuation)
            coeffs = coeffs[:n] + [K.zero] * (n - len(coeffs))
        i = 0
        while i < len(coeffs) and not coeffs[i]:
            i += 1
        coeffs = coeffs[i:]
        valuation += i
        if end is None:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
        if not coeffs:
            valuation = end if end is not None else 0
        self.K = K
        self.valuation = valuation
        self.coeffs = coeffs
        self.end = end

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.end is None

    def coeff(self, k: int) -> FieldScalar:
        if self.end is not None and k >= self.end:
            raise PrecisionExhausted(f"coefficient of tau^{k} is beyond the known precision")
        i = k - self.valuation
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.K.zero

    def _top(self):
        return self.end if self.end is not None else self.valuation + len(self.coeffs)

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        ends = [e for e in (self.end, other.end) if e is not None]
        end = min(ends) if ends else None
        lo = min(self.valuation, other.valuation)
        hi = end if end is not None else max(self._top(), other._top())
        out = [self.K.zero] * max(0, hi - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.valuation + i - lo
                if 0 <= k < len(out):
                    out[k] = out[k] + c
        return LaurentSeries(self.K, lo, out, end)

    def __neg__(self):
        return LaurentSeries(self.K, self.valuation, [-c for c in self.coeffs], self.end)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> LaurentSeries:
        c = self.K(c)
        return LaurentSeries(self.K, self.valuation, [c * v for v in self.coeffs], self.end)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by tau^k."""
        return LaurentSeries(
            self.K, self.valuation + k, self.coeffs, None if self.end is None else self.end + k
        )

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        K = self.K
        cands = []
        if self.end is not None:
            cands.append(self.end + other.valuation)
        if other.end is not None:
            cands.append(other.end + self.valuation)
        end = min(cands) if cands else None
        lo = self.valuation + other.valuation
        if self.is_zero() or other.is_zero():
            return LaurentSeries(K, lo, [], end)
        n = (end - lo) if end is not None else len(self.coeffs) + len(other.coeffs) - 1
        if n <= 0:
            return LaurentSeries(K, lo, [], end)
        return LaurentSeries(K, lo, _ps_mul(self.coeffs, other.coeffs, n, K), end)

    def inverse(self, rel_prec: int | None = None) -> LaurentSeries:
        if self.is_zero():
            raise PrecisionExhausted("cannot invert a series that is zero to the known precision")
        n = self.precision if self.end is not None else rel_prec
        if rel_prec is not None:
            n = min(n, rel_prec)
        if n is None:
            raise ValueError("relative precision required to invert an exact series")
        coeffs = self.coeffs + [self.K.zero] * max(0, n - len(self.coeffs))
        inv = _ps_inv(coeffs, n, self.K)
        return LaurentSeries(self.K, -self.valuation, inv, -self.valuation + n)

    def derivative(self) -> LaurentSeries:
        out = [c * (self.valuation + i) for i, c in enumerate(self.coeffs)]
        return LaurentSeries(
            self.K, self.valuation - 1, out, None if self.end is None else self.end - 1
        )

    def truncate(self, rel_prec: int) -> LaurentSeries:
        end = self.valuation + rel_prec
        if self.end is not None:
            end = min(end, self.end)
        return LaurentSeries(self.K, self.valuation, self.coeffs, end)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.valuation, self.coeffs, self.end) == (other.valuation, other.coeffs, other.end)

    def __repr__(self):
        terms = [f"({c})*tau^{self.valuation + i}" for i, c in enumerate(self.coeffs) if c]
        tail = f" + O(tau^{self.end})" if self.end is not None else ""
        return "LaurentSeries(" + (" + ".join(terms) or "0") + tail + ")"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Uniformizer:
    kind: str  # "x_shift", "y", "infinity"
    description: str
    element: FuncElem | None  # None when the parameter is not a function-field element


def _check_point(curve: Curve, pt: CurvePoint):
    K = curve.field
    if pt.chart == "affine":
        x0, y0 = pt.coords
        if K(y0) ** curve.d != curve.f(K(x0)):
            raise SpecError(f"{pt} is not on the curve")
    elif pt.chart == "infinity":
        if K(pt.coords[0]) ** curve.d != curve.f.lc():
            raise SpecError(f"{pt} is not a point at infinity of the curve")
    else:
        raise SpecError(f"unknown chart {pt.chart!r}")


def uniformizer_at(curve: Curve, pt: CurvePoint) -> Uniformizer:
    _check_point(curve, pt)
    if pt.chart == "infinity":
        e = gcd(curve.d, curve.m)
        dp = curve.d // e
        if dp == 1:
            return Uniformizer("infinity", "s = 1/x", 1 / curve.x())
        return Uniformizer("infinity", f"tau with tau^{dp} = 1/x", None)
    x0, y0 = pt.coords
    if y0:  # d y0^(d-1) != 0
        return Uniformizer("x_shift", f"x - ({x0})", curve.x() - x0)
    if curve.f.derivative()(x0):
        return Uniformizer("y", "y", curve.y())
    raise SingularPoint(f"both partial derivatives vanish at {pt}")


class _Chart:
    """Cached local expansions of x and y at one place, to absolute precision N."""

    def __init__(self, curve: Curve, pt: CurvePoint):
        self.curve = curve
        self.pt = pt
        self.kind = uniformizer_at(curve, pt).kind
        self.N = 0
        K = curve.field
        if self.kind == "x_shift":
            self.x0 = pt.coords[0]
        elif self.kind == "y":
            self.x0 = pt.coords[0]
            self.fshift = curve.f.taylor_shift(self.x0).c
        else:
            e = gcd(curve.d, curve.m)
            self.dp = curve.d // e
            self.mp = curve.m // e
            fstar = curve.f.reverse(curve.m)  # s^m f(1/s)
            # R^d = f*(tau^dp)
            Fc = [K.zero] * (self.dp * fstar.degree + 1)
            for k, c in enumerate(fstar.c):
                Fc[self.dp * k] = c
            self.Fc = Fc
        self._den_cache = {}

    def ensure(self, N: int):
        if N <= self.N:
            return
        K = self.curve.field
        d = self.curve.d
        if self.kind == "x_shift":
            F = self.curve.f.taylor_shift(self.x0).c
            Y = _newton_root(self.pt.coords[1], list(F), d, N, K)
            self.ypow = [[K.one] + [K.zero] * (N - 1)]
            for _ in range(1, d):
                self.ypow.append(_ps_mul(self.ypow[-1], Y, N, K))
            self.Y = Y
        elif self.kind == "y":
            U = _newton_inverse_fn(list(self.fshift), d, N, K)
            self.U = U
            # U has valuation d, so U^k vanishes mod tau^N once k*d >= N
            self.upow = [[K.one] + [K.zero] * (N - 1)]
            k = 1
            while k * d < N:
                self.upow.append(_ps_mul(self.upow[-1], U, N, K))
                k += 1
        else:
            R = _newton_root(self.pt.coords[0], self.Fc, d, N, K)
            self.R = R
            self.rpow = [[K.one] + [K.zero] * (N - 1)]
            for _ in range(1, d):
                self.rpow.append(_ps_mul(self.rpow[-1], R, N, K))
        self.N = N
        self._den_cache = {}

    # evaluation of k[x] polynomials ------------------------------------
    def poly_series(self, p: Poly) -> LaurentSeries:
        K = self.curve.field
        if self.kind == "x_shift":
            return LaurentSeries(K, 0, p.taylor_shift(self.x0).c, None)
        if self.kind == "y":
            c = p.taylor_shift(self.x0).c
            N = self.N
            out = [K.zero] * N
            for k, ck in enumerate(c):
                if not ck:
                    continue
                if k >= len(self.upow):
                    break
                uk = self.upow[k]
                for i in range(k * self.curve.d, N):
                    if uk[i]:
                        out[i] = out[i] + ck * uk[i]
            exact = len(c) <= 1
            return LaurentSeries(K, 0, out if not exact else list(c), None if exact else N)
        # infinity: x = tau^(-dp)
        deg = p.degree
        if deg < 0:
            return LaurentSeries(K, 0, [], None)
        coeffs = [K.zero] * (self.dp * deg + 1)
        for k, ck in enumerate(p.c):
            coeffs[self.dp * (deg - k)] = ck
        return LaurentSeries(K, -self.dp * deg, coeffs, None)

    def ypow_series(self, j: int) -> LaurentSeries:
        K = self.curve.field
        if j == 0:
            return LaurentSeries(K, 0, [K.one], None)
        if self.kind == "x_shift":
            return LaurentSeries(K, 0, self.ypow[j], self.N)
        if self.kind == "y":
            return LaurentSeries(K, j, [K.one], None)
        return LaurentSeries(K, -self.mp * j, self.rpow[j], -self.mp * j + self.N)

    def coord_derivative(self, coord: str) -> LaurentSeries:
        K = self.curve.field
        if coord == "x":
            if self.kind == "x_shift":
                return LaurentSeries(K, 0, [K.one], None)
            if self.kind == "y":
                return LaurentSeries(K, 0, self.U, self.N).derivative()
            return LaurentSeries(K, -self.dp, [K.one], None).derivative()
        if coord == "y":
            if self.kind == "x_shift":
                return LaurentSeries(K, 0, self.Y, self.N).derivative()
            if self.kind == "y":
                return LaurentSeries(K, 0, [K.one], None)
            return LaurentSeries(K, -self.mp, self.R, -self.mp + self.N).derivative()
        raise ValueError(f"unknown coordinate {coord!r}")

    def num_series(self, e: FuncElem) -> LaurentSeries:
        total = None
        for j, p in enumerate(e.nums):
            if not p:
                continue
            term = self.poly_series(p) * self.ypow_series(j)
            total = term if total is None else total + term
        return total

    def den_series(self, q: Poly) -> LaurentSeries:
        s = self._den_cache.get(q)
        if s is None:
            s = self.poly_series(q)
            self._den_cache[q] = s
        return s


_CHARTS: dict = {}


def _chart(curve: Curve, pt: CurvePoint) -> _Chart:
    key = (id(curve), pt)
    ch = _CHARTS.get(key)
    if ch is None or ch.curve is not curve:
        ch = _Chart(curve, pt)
        _CHARTS[key] = ch
    return ch


def _expand(e: FuncElem, pt: CurvePoint, rel_prec: int) -> LaurentSeries:
    """Expansion with at least ``rel_prec`` correct terms, escalating internally."""
    if e.is_zero():
        raise ValueError("cannot expand the zero function")
    ch = _chart(e.curve, pt)
    N = max(INITIAL_PRECISION, ch.N)
    while True:
        ch.ensure(N)
        num = ch.num_series(e)
        den = ch.den_series(e.den)
        if not num.is_zero() and not den.is_zero():
            avail = min(
                num.precision if num.end is not None else rel_prec,
                den.precision if den.end is not None else rel_prec,
            )
            if avail >= rel_prec:
                return (num * den.inverse(rel_prec)).truncate(rel_prec)
        if N >= _PRECISION_CAP:
            raise PrecisionExhausted(
                f"expansion at {pt} not resolved within precision cap {_PRECISION_CAP}"
            )
        N = min(2 * N, _PRECISION_CAP)


def expand_at(e: FuncElem, pt: CurvePoint, prec: int) -> LaurentSeries:
    """Laurent expansion of e at pt in the local uniformizer, to ``prec`` terms."""
    if prec < 1:
        raise ValueError("prec must be >= 1")
    return _expand(e, pt, prec)


def ord_at(e: FuncElem, pt: CurvePoint) -> int:
    return _expand(e, pt, 1).valuation


def local_series(e: FuncElem, pt: CurvePoint, upto: int) -> LaurentSeries:
    """Expansion of e known at least modulo tau^upto."""
    v = ord_at(e, pt)
    return _expand(e, pt, max(1, upto - v))


def coord_derivative(curve: Curve, coord: str, pt: CurvePoint, upto: int) -> LaurentSeries:
    """d(coord)/d(tau) at pt, known at least modulo tau^upto."""
    ch = _chart(curve, pt)
    N = max(INITIAL_PRECISION, ch.N)
    while True:
        ch.ensure(N)
        D = ch.coord_derivative(coord)
        if D.end is None or D.end >= upto:
            return D
        if N >= _PRECISION_CAP:
            raise PrecisionExhausted(f"coordinate expansion at {pt} exceeds the precision cap")
        N = min(2 * N, _PRECISION_CAP)


def differential_series(w: FuncElem, coord: str, pt: CurvePoint, upto: int) -> LaurentSeries:
    """Expansion of w * d(coord)/d(tau), known at least modulo tau^upto."""
    vw = ord_at(w, pt)
    D = coord_derivative(w.curve, coord, pt, upto - vw)
    s = local_series(w, pt, upto - D.valuation)
    return s * D


def residue_at(h: FuncElem, differential, pt: CurvePoint) -> FieldScalar:
    """Res_pt(h * w * d(coord)) for differential = (w, coord)."""
    w, coord = differential
    integrand = h * w
    if integrand.is_zero():
        return h.curve.field.zero
    return differential_series(integrand, coord, pt, 0).coeff(-1)
