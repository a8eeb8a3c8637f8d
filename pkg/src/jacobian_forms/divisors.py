"""Divisors as formal sums over declared points, and principal divisors."""
from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence

from .errors import IncompleteSupport, SpecError
from .funcfield import FuncElem
from .localgeom import CurvePoint, infinity_place_count, ord_at

__all__ = ["Divisor", "parse_divisor", "poles_within", "principal_divisor"]


class Divisor:
    """Immutable finite formal sum of points with nonzero integer multiplicities."""

    __slots__ = ("_hash", "degree", "terms")

    def __init__(self, terms: Mapping[CurvePoint, int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for pt, m in items:
            acc[pt] = acc.get(pt, 0) + int(m)
        self.terms = {pt: m for pt, m in acc.items() if m}
        self.degree = sum(self.terms.values())
        self._hash = None

    @classmethod
    def point(cls, pt: CurvePoint, m: int = 1) -> Divisor:
        return cls({pt: m})

    def __getitem__(self, pt: CurvePoint) -> int:
        return self.terms.get(pt, 0)

    def support(self) -> list:
        return sorted(self.terms, key=CurvePoint.sort_key)

    def __iter__(self):
        return iter(self.support())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: Divisor) -> Divisor:
        out = dict(self.terms)
        for pt, m in other.terms.items():
            out[pt] = out.get(pt, 0) + m
        return Divisor(out)

    def __neg__(self):
        return Divisor({pt: -m for pt, m in self.terms.items()})

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __mul__(self, k: int) -> Divisor:
        return Divisor({pt: k * m for pt, m in self.terms.items()})

    __rmul__ = __mul__

    def min(self, other: Divisor) -> Divisor:
        pts = set(self.terms) | set(other.terms)
        return Divisor({pt: min(self[pt], other[pt]) for pt in pts})

    def max(self, other: Divisor) -> Divisor:
        pts = set(self.terms) | set(other.terms)
        return Divisor({pt: max(self[pt], other[pt]) for pt in pts})

    def is_effective(self) -> bool:
        return all(m > 0 for m in self.terms.values())

    def __ge__(self, other: Divisor) -> bool:
        return (self - other).is_effective()

    def __le__(self, other: Divisor) -> bool:
        return (other - self).is_effective()

    def __eq__(self, other):
        if isinstance(other, Divisor):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        # positive terms first, each group in point order
        for pt in sorted(self.support(), key=lambda q: self.terms[q] < 0):
            m = self.terms[pt]
            body = str(pt) if abs(m) == 1 else f"{abs(m)}{pt}"
            parts.append(("-" if m < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self):
        return f"Divisor({self})"

    def to_text(self) -> str:
        """Line format: ``<multiplicity> <point-label>``, one term per line."""
        lines = []
        for pt in self.support():
            if not pt.label:
                raise SpecError("only labelled points can be serialized")
            lines.append(f"{self.terms[pt]} {pt.label}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str, points: Mapping[str, CurvePoint]) -> Divisor:
        terms = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise SpecError(f"line {lineno}: expected '<multiplicity> <point-label>'")
            try:
                m = int(parts[0])
            except ValueError:
                raise SpecError(f"line {lineno}: bad multiplicity {parts[0]!r}") from None
            if parts[1] not in points:
                raise SpecError(f"line {lineno}: unknown point {parts[1]!r}")
            terms.append((points[parts[1]], m))
        return cls(terms)


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z][\w']*)\s*")


def parse_divisor(expr: str, points: Mapping[str, CurvePoint]) -> Divisor:
    """Parse an inline sum such as ``Q'1 + Q'3 + Q'4 - 3P``; ``0`` is the empty divisor."""
    s = expr.strip()
    if s in ("", "0"):
        return Divisor()
    terms = []
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise SpecError(f"cannot parse divisor {expr!r} near position {pos}")
        sign, coef, label = m.groups()
        if label not in points:
            raise SpecError(f"unknown point {label!r} in divisor {expr!r}")
        mult = int(coef) if coef else 1
        terms.append((points[label], -mult if sign == "-" else mult))
        pos = m.end()
        first = False
    return Divisor(terms)


def principal_divisor(e: FuncElem, universe: Sequence[CurvePoint]) -> Divisor:
    """div(e) restricted to the universe; raises IncompleteSupport unless of degree 0."""
    if e.is_zero():
        raise ValueError("the zero function has no divisor")
    D = Divisor((pt, ord_at(e, pt)) for pt in universe)
    if D.degree != 0:
        raise IncompleteSupport(
            f"div({e}) computed over the universe has degree {D.degree}; "
            "zeros or poles lie outside the declared points"
        )
    return D


def poles_within(e: FuncElem, universe: Sequence[CurvePoint]) -> bool:
    """True when every pole of e provably lies in the universe.

    Poles sit over roots of the denominator and over infinity.  The check
    requires the denominator to factor into (x - x0) for declared x0 whose
    whole fiber is declared, and the fiber at infinity to be complete.
    """
    curve = e.curve
    K = curve.field
    inf_pts = [pt for pt in universe if pt.chart == "infinity"]
    inf_complete = len(set(inf_pts)) == infinity_place_count(curve)
    fibers: dict = {}
    for pt in universe:
        if pt.chart == "affine":
            fibers.setdefault(pt.coords[0], set()).add(pt.coords[1])
    q = e.den
    for x0, ys in fibers.items():
        complete = (len(ys) == 1 and not next(iter(ys))) or len(ys) == curve.d
        if not complete:
            continue
        lin = type(q).from_roots(K, [x0])
        while q.degree > 0:
            quo, rem = q.divmod(lin)
            if rem:
                break
            q = quo
    if q.degree > 0:
        return False
    # a pole at infinity is possible unless the numerator degree is dominated
    if not inf_complete:
        d, m = curve.d, curve.m
        for j, p in enumerate(e.nums):
            if p and d * p.degree + m * j > d * e.den.degree:
                return False
    return True
