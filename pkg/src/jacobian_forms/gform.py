"""G-forms: rank-one k-general matrices with entries in L(G)."""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from .divisors import Divisor, poles_within
from .errors import (
    DimensionMismatch,
    IncompleteSupport,
    KGeneralityFailure,
    SingularTransform,
    SpecError,
)
from .funcfield import Curve, FuncElem, k_linear_independent
from .linalg import det
from .localgeom import ord_at

__all__ = [
    "GForm",
    "GFormReport",
    "build_gform",
    "extract_divisor",
    "form_size",
    "k_transform",
    "transpose_gform",
    "validate_gform",
]


def form_size(G: Divisor, genus: int) -> int:
    if G.degree % 2:
        raise DimensionMismatch(f"deg G = {G.degree} is odd")
    half = G.degree // 2
    if half < 2 * genus:
        raise DimensionMismatch(f"deg G / 2 = {half} < 2g = {2 * genus}")
    return half - genus + 1


@dataclass
class GForm:
    """An n x n matrix over the function field tagged with its divisor G.

    ``u`` and ``v``, when present, are a known factorization X = u v.
    """

    G: Divisor
    entries: list
    universe: list
    u: list | None = None
    v: list | None = None

    def __post_init__(self):
        self.entries = [list(r) for r in self.entries]
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise DimensionMismatch("G-form must be square")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def curve(self) -> Curve:
        return self.entries[0][0].curve

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> list:
        return list(self.entries[i])

    def col(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def __eq__(self, other):
        return isinstance(other, GForm) and self.G == other.G and self.entries == other.entries

    def factorization(self):
        """(u, v) with X = u v; u is the first k-independent column."""
        if self.u is not None:
            return list(self.u), list(self.v)
        n = self.n
        j0 = next((j for j in range(n) if k_linear_independent(self.col(j))), None)
        if j0 is None:
            raise KGeneralityFailure("no column with k-independent entries")
        col = self.col(j0)
        i0 = next(i for i in range(n) if col[i])
        piv = self.entries[i0][j0]
        u = col
        v = [e / piv for e in self.entries[i0]]
        return u, v

    # serialization ------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"G = {self.G}", f"n = {self.n}"]
        for i, r in enumerate(self.entries):
            for j, e in enumerate(r):
                lines.append(f"X[{i + 1},{j + 1}] = {e.to_text()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, curve: Curve, points: dict) -> GForm:
        from .divisors import parse_divisor
        from .specfile import eval_expr

        names = {"x": curve.x(), "y": curve.y(), curve.field.name: curve.const(curve.field.gen)}
        G = None
        n = None
        cells: dict = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise SpecError(f"line {lineno}: expected 'key = value'")
            key, val = key.strip(), val.strip()
            if key == "G":
                G = parse_divisor(val, points)
            elif key == "n":
                n = int(val)
            elif key.startswith("X[") and key.endswith("]"):
                try:
                    i, j = (int(s) for s in key[2:-1].split(","))
                except ValueError:
                    raise SpecError(f"line {lineno}: bad index {key}") from None
                num, bar, den = val.partition("|")
                if not bar:
                    raise SpecError(f"line {lineno}: entry must read 'num | den'")
                a = eval_expr(num.strip(), names, lineno)
                b = eval_expr(den.strip(), names, lineno)
                a = a if isinstance(a, FuncElem) else curve.const(a)
                cells[(i - 1, j - 1)] = a / b
            else:
                raise SpecError(f"line {lineno}: unknown key {key!r}")
        if G is None or n is None:
            raise SpecError("G-form file needs 'G =' and 'n =' lines")
        try:
            entries = [[cells[(i, j)] for j in range(n)] for i in range(n)]
        except KeyError as exc:
            raise SpecError(f"missing entry X[{exc.args[0][0] + 1},{exc.args[0][1] + 1}]") from None
        return cls(G, entries, list(points.values()))


def build_gform(u: Sequence[FuncElem], v: Sequence[FuncElem], G: Divisor, universe) -> GForm:
    """X = u v from bases u of L(D) and v of L(G - D)."""
    genus = u[0].curve.genus
    n = form_size(G, genus)
    if len(u) != n or len(v) != n:
        raise DimensionMismatch(f"need {n} entries in each factor, got {len(u)} and {len(v)}")
    D = getattr(u, "divisor", None)
    if D is not None and 2 * D.degree != G.degree:
        raise DimensionMismatch(f"deg D = {D.degree} but deg G / 2 = {G.degree // 2}")
    u, v = list(u), list(v)
    entries = [[a * b for b in v] for a in u]
    return GForm(G, entries, list(universe), u, v)


@dataclass
class GFormReport:
    ok: bool = True
    violations: list = field(default_factory=list)
    independent_row: int | None = None
    independent_col: int | None = None

    def fail(self, item: str, where, detail: str):
        self.ok = False
        self.violations.append((item, where, detail))

    @property
    def first(self):
        return self.violations[0] if self.violations else None

    def __str__(self):
        if self.ok:
            return f"valid (row {self.independent_row + 1}, column {self.independent_col + 1} k-independent)"
        item, where, detail = self.first
        return f"invalid: {item} at {where}: {detail}"


def in_lspace(e: FuncElem, G: Divisor, universe) -> bool:
    if e.is_zero():
        return True
    if not poles_within(e, universe):
        return False
    return all(ord_at(e, pt) >= -G[pt] for pt in universe)


def validate_gform(X: GForm, stop_at_first: bool = False) -> GFormReport:
    rep = GFormReport()
    n = X.n
    try:
        expected = form_size(X.G, X.curve.genus)
        if expected != n:
            rep.fail("size", None, f"n = {n} but deg G / 2 - g + 1 = {expected}")
    except DimensionMismatch as exc:
        rep.fail("size", None, str(exc))
    for i in range(n):
        for j in range(n):
            if not in_lspace(X.entries[i][j], X.G, X.universe):
                rep.fail("membership", (i + 1, j + 1), f"entry not in L({X.G})")
                if stop_at_first:
                    return rep
    # rank <= 1: with a nonzero pivot, every minor through the pivot vanishing
    # forces all minors to vanish
    piv = next(((i, j) for i in range(n) for j in range(n) if X.entries[i][j]), None)
    if piv is not None:
        i0, j0 = piv
        a = X.entries[i0][j0]
        for i in range(n):
            for j in range(n):
                if i == i0 or j == j0:
                    continue
                if X.entries[i][j] * a != X.entries[i0][j] * X.entries[i][j0]:
                    rep.fail(
                        "minor",
                        ((i0 + 1, i + 1), (j0 + 1, j + 1)),
                        "2x2 minor does not vanish",
                    )
                    if stop_at_first:
                        return rep
    r = next((i for i in range(n - 1, -1, -1) if k_linear_independent(X.row(i))), None)
    c = next((j for j in range(n) if k_linear_independent(X.col(j))), None)
    if r is None or c is None:
        rep.fail("k-generality", None, "no row" if r is None else "no column")
    rep.independent_row, rep.independent_col = r, c
    return rep


def extract_divisor(X: GForm, row: int | None = None) -> Divisor:
    """G + min_j div(X[row, j]) for a row with k-independent entries.

    The default row is the last such row.
    """
    n = X.n
    if row is None:
        row = next((i for i in range(n - 1, -1, -1) if k_linear_independent(X.row(i))), None)
        if row is None:
            raise KGeneralityFailure("no row with k-independent entries")
    # Individual entries may vanish off the universe; only the minimum has to
    # live there.  With poles inside the universe the restricted minimum is
    # exact precisely when the degree comes out as deg G / 2.
    entries = [e for e in X.row(row) if not e.is_zero()]
    m = Divisor({pt: min(ord_at(e, pt) for e in entries) for pt in X.universe})
    out = X.G + m
    if 2 * out.degree != X.G.degree:
        raise IncompleteSupport(
            f"row {row + 1} has a common zero outside the declared points (degree {out.degree})"
        )
    return out


def transpose_gform(X: GForm) -> GForm:
    n = X.n
    entries = [[X.entries[j][i] for j in range(n)] for i in range(n)]
    u = v = None
    if X.u is not None:
        u, v = list(X.v), list(X.u)
    return GForm(X.G, entries, X.universe, u, v)


def k_transform(X: GForm, Phi, Psi) -> GForm:
    """Phi X Psi for invertible scalar matrices."""
    K = X.curve.field
    n = X.n
    Phi = [[K(a) for a in r] for r in Phi]
    Psi = [[K(a) for a in r] for r in Psi]
    if len(Phi) != n or len(Psi) != n or any(len(r) != n for r in Phi + Psi):
        raise DimensionMismatch(f"transforms must be {n} x {n}")
    if not det(K, Phi) or not det(K, Psi):
        raise SingularTransform("transform matrix is singular")
    u, v = X.factorization()
    nu = [_comb(Phi[i], u) for i in range(n)]
    nv = [_comb([Psi[k][j] for k in range(n)], v) for j in range(n)]
    entries = [[a * b for b in nv] for a in nu]
    return GForm(X.G, entries, X.universe, nu, nv)


def _comb(coeffs, fs):
    acc = None
    for c, e in zip(coeffs, fs):
        if c:
            t = e * c
            acc = t if acc is None else acc + t
    return acc if acc is not None else fs[0].curve.zero()
