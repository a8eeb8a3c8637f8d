"""Command-line driver.

Exit codes: 0 success, 1 validation failure, 2 parse or spec error,
3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import sys

from .divisors import Divisor
from .errors import (
    ImperfectPairing,
    IncompleteSupport,
    InsufficientGenerators,
    JacobianError,
    PreconditionError,
    SpecError,
)
from .gform import GForm, extract_divisor, validate_gform
from .grouplaw import (
    add_forms,
    context_from_spec,
    form_for_divisor,
    group_add,
    group_negate,
    reduce_form,
)
from .localgeom import set_precision_cap
from .modular import default_rng
from .specfile import load_spec
from .tensoralg import (
    MATERIALIZE_LIMIT,
    abel_map,
    abeliant,
    abeliant_oracle,
    jacobi_from_text,
    jacobi_validate,
)

EXIT_OK, EXIT_INVALID, EXIT_SPEC, EXIT_INTERNAL = 0, 1, 2, 3


class _Failed(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _out(*parts):
    print(*parts, flush=True)


def _stage(name: str):
    _out(f"== {name}")


def _check(label: str, ok: bool, detail: str = ""):
    _out(f"  [{'ok' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else ""))
    if not ok:
        raise _Failed(EXIT_INVALID, f"check failed: {label}")


def _all_gens(spec):
    """Generators with pairwise distinct divisors, in declaration order."""
    names, seen = [], set()
    for name, D in spec.expected.items():
        if D not in seen:
            seen.add(D)
            names.append(name)
    return spec.generator_set(names)


def _form(spec, ctx, D: Divisor) -> GForm:
    try:
        return form_for_divisor(ctx, D)
    except InsufficientGenerators:
        return form_for_divisor(ctx, D, _all_gens(spec))


def _jacobi_report(X: GForm, ctx, full: bool) -> bool:
    Z = abel_map(X)
    rep = jacobi_validate(Z, "full" if full else "core", ctx.G, ctx.universe, default_rng())
    for line in str(rep).splitlines():
        _out(f"  {line}")
    return rep.ok


def _run_oracle(count: int = 20) -> None:
    rng = default_rng()
    for _ in range(count):
        n = rng.choice((2, 3))
        X = [[[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)] for _ in range(n + 2)]
        if abeliant(X) != abeliant_oracle(X):
            raise _Failed(EXIT_INTERNAL, f"abeliant disagrees with the expansion oracle on {X}")
    _out(f"  [ok] abeliant agrees with the expansion oracle on {count} random instances")


# ---------------------------------------------------------------------------


def cmd_example2(args) -> int:
    _stage("curve and generators")
    spec = load_spec(args.spec)
    c = spec.curve
    _out(f"  {c}  genus {c.genus}")
    for name, D in spec.expected.items():
        _out(f"  div {name} = {D}")
    ctx = context_from_spec(spec)
    if "D" not in spec.divisors or "D'" not in spec.divisors:
        raise SpecError("spec must name divisors D and D' in [divisors]")
    D, D2 = spec.divisors["D"], spec.divisors["D'"]

    _stage("2E-forms")
    XD, XD2 = _form(spec, ctx, D), _form(spec, ctx, D2)
    for label, X, want in (("X_D", XD, D), ("X_D'", XD2, D2)):
        rep = validate_gform(X)
        _check(f"{label} is a valid {X.n}x{X.n} 2E-form", rep.ok, str(rep))
        got = extract_divisor(X) - ctx.E
        _check(f"{label} represents {want}", got == want, f"extracted {got} after subtracting E")
        if args.emit_gforms:
            _out(f"-- {label}")
            sys.stdout.write(X.to_text())

    _stage("compression functional")
    rho = ctx.compression()
    _out(f"  f4E = {ctx.f4E}, omega = ({ctx.omega[0]}) d{ctx.omega[1]}")
    _check("pairing on L(2E)/L(E) is perfect", rho.gram_rank == ctx.E.degree, f"rank {rho.gram_rank}")

    _stage("Kronecker block and reduction")
    block = add_forms(XD, XD2)
    _out(f"  block d: {block.n}x{block.n}, extracted divisor {extract_divisor(block)}")
    z = reduce_form(block, rho)
    rep = validate_gform(z)
    _check(f"z is a valid {z.n}x{z.n} 2E-form", rep.ok, str(rep))
    got = extract_divisor(z)
    want = ctx.E + D + D2
    _check("z represents E + D + D'", got == want, str(got))
    if args.emit_gforms:
        _out("-- z")
        sys.stdout.write(z.to_text())

    _stage("Abel image of z")
    ok = _jacobi_report(z, ctx, args.full_jacobi)
    _check("Jacobi core items", ok)
    if args.oracle:
        _stage("oracle")
        _run_oracle()
    _out("example2: all checks passed")
    return EXIT_OK


def _divisor_arg(spec, text: str) -> Divisor:
    D = spec.divisor(text)
    if D.degree != 0:
        raise PreconditionError(f"divisor {D} has degree {D.degree}; classes are given by degree-0 divisors")
    return D


def cmd_add(args) -> int:
    spec = load_spec(args.spec)
    ctx = context_from_spec(spec)
    D1, D2 = _divisor_arg(spec, args.d1), _divisor_arg(spec, args.d2)
    X1, X2 = _form(spec, ctx, D1), _form(spec, ctx, D2)
    z = group_add(X1, X2, ctx)
    rep = validate_gform(z)
    if args.emit_gforms:
        sys.stdout.write(z.to_text())
    _out(f"sum: {extract_divisor(z) - ctx.E}")
    if not rep.ok:
        _out(str(rep))
        return EXIT_INVALID
    if args.full_jacobi:
        return EXIT_OK if _jacobi_report(z, ctx, True) else EXIT_INVALID
    return EXIT_OK


def cmd_negate(args) -> int:
    spec = load_spec(args.spec)
    ctx = context_from_spec(spec)
    D = _divisor_arg(spec, args.d)
    X = group_negate(_form(spec, ctx, D), ctx)
    rep = validate_gform(X)
    if args.emit_gforms:
        sys.stdout.write(X.to_text())
    _out(f"negation: {extract_divisor(X) - ctx.E}")
    return EXIT_OK if rep.ok else EXIT_INVALID


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc


def cmd_validate(args) -> int:
    spec = load_spec(args.spec)
    text = _read(args.file)
    if any(line.strip().startswith("Z[") for line in text.splitlines()):
        Z = jacobi_from_text(text, spec.curve)
        rep = jacobi_validate(Z, "full" if args.full_jacobi else "core", rng=default_rng())
        _out(str(rep))
        return EXIT_OK if rep.ok else EXIT_INVALID
    X = GForm.from_text(text, spec.curve, spec.points)
    rep = validate_gform(X)
    _out(str(rep))
    if rep.ok:
        _out(f"represents: {extract_divisor(X)}")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_abel(args) -> int:
    spec = load_spec(args.spec)
    X = GForm.from_text(_read(args.file), spec.curve, spec.points)
    rep = validate_gform(X)
    if not rep.ok:
        _out(str(rep))
        return EXIT_INVALID
    if X.n > MATERIALIZE_LIMIT:
        raise PreconditionError(f"n = {X.n} is above {MATERIALIZE_LIMIT}; the image is only kept in factored form")
    sys.stdout.write(abel_map(X).to_text())
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="curve/context spec file (default: the shipped genus-3 example)")
    common.add_argument("--precision-cap", type=int, help="maximum local series precision")
    common.add_argument("--emit-gforms", action="store_true", help="print serialized G-forms")
    common.add_argument("--full-jacobi", action="store_true", help="also run Jacobi items 4, 5 and 7")
    common.add_argument("--oracle", action="store_true", help="compare the abeliant with the expansion oracle")

    p = argparse.ArgumentParser(prog="jacobian-forms", description="Jacobian group law on G-forms")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("example2", parents=[common], help="run the genus-3 worked example")
    s.set_defaults(func=cmd_example2)
    s = sub.add_parser("add", parents=[common], help="add two degree-0 divisor classes")
    s.add_argument("d1")
    s.add_argument("d2")
    s.set_defaults(func=cmd_add)
    s = sub.add_parser("negate", parents=[common], help="negate a degree-0 divisor class")
    s.add_argument("d")
    s.set_defaults(func=cmd_negate)
    s = sub.add_parser("validate", parents=[common], help="validate a G-form or Jacobi matrix file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)
    s = sub.add_parser("abel", parents=[common], help="print the Abel image of a small G-form file")
    s.add_argument("file")
    s.set_defaults(func=cmd_abel)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.precision_cap is not None:
        if args.precision_cap < 8:
            _out("error: --precision-cap must be at least 8")
            return EXIT_SPEC
        set_precision_cap(args.precision_cap)
    try:
        return args.func(args)
    except _Failed as exc:
        _out(f"error: {exc}")
        return exc.code
    except ImperfectPairing as exc:
        _out(f"error: ImperfectPairing: {exc}")
        return EXIT_INVALID
    except (SpecError, PreconditionError, InsufficientGenerators, IncompleteSupport) as exc:
        _out(f"error: {type(exc).__name__}: {exc}")
        return EXIT_SPEC
    except JacobianError as exc:
        _out(f"error: internal: {type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
