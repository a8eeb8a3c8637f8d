"""Line-oriented curve/context spec files.

Sections::

    [field]       min_poly = t^2 + 1
    [curve]       d = 4 / f = x*(x-1)*(x-2)*(x-3) / genus = 3
    [points]      P = affine 1, 0   |   Q2 = infinity t
    [generators]  f1 = 1/(x-1) : Q1 + Q2 + Q3 + Q4 - 4P
    [context]     E = 7P / gens = f1, f2, g1 / f4E = g1^-7 / omega = g1*f2 dy
    [divisors]    D = Q'1 + Q'3 + Q'4 - 3P

Expressions use ``+ - * / ^`` over integers, ``t``, ``x``, ``y`` and
previously defined generator names.  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import ast
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .basefield import NumberField
from .divisors import Divisor, parse_divisor
from .errors import JacobianError, SpecError
from .funcfield import Curve, FuncElem
from .localgeom import affine_point, infinity_point
from .poly import Poly
from .rrspace import GeneratorSet

__all__ = ["SpecFile", "default_spec_path", "eval_expr", "load_spec", "parse_spec"]

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def eval_expr(text: str, names: dict, lineno: int | None = None):
    """Evaluate an arithmetic expression over the values in ``names``."""
    where = f"line {lineno}: " if lineno else ""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SpecError(f"{where}cannot parse expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise SpecError(f"{where}unknown name {node.id!r} in {text!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = ev(node.right)
                if not isinstance(e, int):
                    raise SpecError(f"{where}exponent must be an integer in {text!r}")
                return ev(node.left) ** e
            op = _BINOPS.get(type(node.op))
            if op is None:
                raise SpecError(f"{where}unsupported operator in {text!r}")
            a, b = ev(node.left), ev(node.right)
            if op is operator.truediv and isinstance(a, int) and isinstance(b, int):
                return Fraction(a, b)
            return op(a, b)
        raise SpecError(f"{where}unsupported syntax in {text!r}")

    try:
        return ev(tree)
    except JacobianError:
        raise
    except (ZeroDivisionError, ArithmeticError, TypeError) as exc:
        raise SpecError(f"{where}cannot evaluate {text!r}: {exc}") from exc


@dataclass
class SpecFile:
    field: NumberField
    curve: Curve
    points: dict
    generators: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    context: dict = field(default_factory=dict)
    divisors: dict = field(default_factory=dict)
    source: str | None = None

    @property
    def universe(self) -> list:
        return list(self.points.values())

    def generator_set(self, names=None) -> GeneratorSet:
        names = names or list(self.generators)
        gs = GeneratorSet(self.universe)
        for name in names:
            if name not in self.generators:
                raise SpecError(f"unknown generator {name!r}")
            gs.add(name, self.generators[name], self.expected.get(name))
        return gs

    def divisor(self, text: str) -> Divisor:
        if text in self.divisors:
            return self.divisors[text]
        return parse_divisor(text, self.points)

    def function(self, text: str) -> FuncElem:
        f = eval_expr(text, self._names())
        return f if isinstance(f, FuncElem) else self.curve.const(f)

    def _names(self) -> dict:
        c = self.curve
        names = {"x": c.x(), "y": c.y(), self.field.name: c.const(self.field.gen)}
        names.update(self.generators)
        return names


def _sections(text: str):
    cur = None
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            cur = line[1:-1].strip().lower()
            if cur in out:
                raise SpecError(f"line {lineno}: duplicate section [{cur}]")
            out[cur] = []
            continue
        if cur is None:
            raise SpecError(f"line {lineno}: content before the first section header")
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected 'name = value'")
        key, val = line.split("=", 1)
        out[cur].append((lineno, key.strip(), val.strip()))
    return out


def _kv(entries):
    return {k: (ln, v) for ln, k, v in entries}


def parse_spec(text: str, source: str | None = None, verify: bool = True) -> SpecFile:
    secs = _sections(text)
    for need in ("field", "curve", "points"):
        if need not in secs:
            raise SpecError(f"missing section [{need}]")

    fld = _kv(secs["field"])
    if "min_poly" not in fld:
        raise SpecError("[field] needs min_poly")
    ln, mp = fld["min_poly"]
    tname = fld.get("name", (ln, "t"))[1]
    coeffs = _poly_coeffs(mp, tname, ln)
    K = NumberField(coeffs, name=tname)

    cv = _kv(secs["curve"])
    for need in ("d", "f"):
        if need not in cv:
            raise SpecError(f"[curve] needs {need}")
    try:
        d = int(cv["d"][1])
    except ValueError:
        raise SpecError(f"line {cv['d'][0]}: d must be an integer") from None
    xpoly = Poly.x(K)
    fpoly = eval_expr(cv["f"][1], {"x": xpoly, tname: Poly.const(K, K.gen)}, cv["f"][0])
    if not isinstance(fpoly, Poly):
        raise SpecError(f"line {cv['f'][0]}: f must be a polynomial in x")
    genus = int(cv["genus"][1]) if "genus" in cv else None
    curve = Curve(K, d, fpoly, genus)

    scal = {tname: K.gen}
    points: dict = {}
    for ln, label, val in secs["points"]:
        kind, _, rest = val.partition(" ")
        args = [a.strip() for a in rest.split(",") if a.strip()]
        vals = [K(eval_expr(a, scal, ln)) for a in args]
        if kind == "affine" and len(vals) == 2:
            pt = affine_point(curve, vals[0], vals[1], label)
        elif kind == "infinity" and len(vals) == 1:
            pt = infinity_point(curve, vals[0], label)
        else:
            raise SpecError(f"line {ln}: expected 'affine x0, y0' or 'infinity zeta'")
        if pt in points.values():
            raise SpecError(f"line {ln}: point {label} duplicates an earlier point")
        points[label] = pt

    spec = SpecFile(K, curve, points, source=source)
    for ln, name, val in secs.get("generators", []):
        expr, _, exp_div = val.partition(":")
        f = eval_expr(expr.strip(), spec._names(), ln)
        if not isinstance(f, FuncElem):
            f = curve.const(f)
        spec.generators[name] = f
        if exp_div.strip():
            spec.expected[name] = parse_divisor(exp_div.strip(), points)
    if verify and spec.expected:
        from .divisors import principal_divisor

        for name, D in spec.expected.items():
            got = principal_divisor(spec.generators[name], spec.universe)
            if got != D:
                raise SpecError(f"generator {name}: declared divisor {D} but computed {got}")

    for ln, name, val in secs.get("divisors", []):
        spec.divisors[name] = parse_divisor(val, points)

    ctx = _kv(secs.get("context", []))
    if ctx:
        out = {}
        if "E" in ctx:
            out["E"] = parse_divisor(ctx["E"][1], points)
        if "gens" in ctx:
            out["gens"] = [g.strip() for g in ctx["gens"][1].split(",") if g.strip()]
        if "f4E" in ctx:
            out["f4E"] = spec.function(ctx["f4E"][1])
        if "omega" in ctx:
            ln, val = ctx["omega"]
            parts = val.rsplit(None, 1)
            if len(parts) != 2 or parts[1] not in ("dx", "dy"):
                raise SpecError(f"line {ln}: omega must read '<expr> dx' or '<expr> dy'")
            out["omega"] = (spec.function(parts[0]), parts[1][1])
        spec.context = out
    return spec


def _poly_coeffs(text: str, var: str, lineno: int):
    p = eval_expr(text, {var: Poly.x(_QQ())}, lineno)
    if not isinstance(p, Poly):
        raise SpecError(f"line {lineno}: min_poly must be a polynomial in {var}")
    return [c.to_fraction() for c in p.c]


def _QQ():
    from .basefield import QQ

    return QQ


def load_spec(path: str | Path | None = None, verify: bool = True) -> SpecFile:
    if path is None:
        text = default_spec_path().read_text()
        return parse_spec(text, "example2.spec", verify)
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SpecError(f"cannot read spec file {p}: {exc}") from exc
    return parse_spec(text, str(p), verify)


def default_spec_path():
    return resources.files("jacobian_forms") / "data" / "example2.spec"
