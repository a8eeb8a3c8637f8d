"""Reduction of the base field modulo a prime and random curve points mod p.

Used to test identities among very large tensor-algebra elements: a nonzero
value at a point certifies nonvanishing, and agreement at independent random
points certifies an identity with error probability about deg / p per point.
"""
from __future__ import annotations

import os
import random
from functools import cache

import sympy
from sympy.ntheory.residue_ntheory import nthroot_mod, polynomial_congruence

from .basefield import FieldScalar, NumberField
from .funcfield import Curve, FuncElem

__all__ = ["ModularContext", "default_rng", "mod_det", "modular_context"]

_PRIME_FLOOR = 2**61


def default_rng(seed: int | None = None) -> random.Random:
    if seed is None:
        seed = int(os.environ.get("JACOBI_SEED", "20240601"))
    return random.Random(seed)


class ModularContext:
    """k -> F_p via a root r of the minimal polynomial modulo p."""

    def __init__(self, field: NumberField, p: int, root: int):
        self.field = field
        self.p = p
        self.root = root
        self._pows = [pow(root, k, p) for k in range(field.degree)]

    def scalar(self, a: FieldScalar) -> int:
        p = self.p
        acc = sum(n * rk for n, rk in zip(a.nums, self._pows)) % p
        if a.den % p == 0:
            raise ZeroDivisionError("denominator divisible by p")
        return acc * pow(a.den, -1, p) % p

    def poly(self, P, x: int) -> int:
        p = self.p
        acc = 0
        for c in reversed(P.c):
            acc = (acc * x + self.scalar(c)) % p
        return acc

    def func(self, e: FuncElem, pt) -> int:
        x, y = pt
        p = self.p
        q = self.poly(e.den, x)
        if q == 0:
            raise ZeroDivisionError("denominator vanishes at the sample point")
        acc = 0
        for num in reversed(e.nums):
            acc = (acc * y + self.poly(num, x)) % p
        return acc * pow(q, -1, p) % p

    def random_point(self, curve: Curve, rng: random.Random):
        p = self.p
        while True:
            x = rng.randrange(p)
            fx = self.poly(curve.f, x)
            if fx == 0:
                return (x, 0)
            y = nthroot_mod(fx, curve.d, p)
            if y is not None:
                return (x, int(y))


@cache
def _context_for(field: NumberField, start: int) -> ModularContext:
    t = sympy.Symbol("t")
    mpoly = sum(sympy.Rational(c) * t**k for k, c in enumerate(field.min_poly))
    den = sympy.ilcm(*[sympy.Rational(c).q for c in field.min_poly])
    mpoly = sympy.expand(mpoly * den)
    p = sympy.nextprime(start)
    while True:
        if den % p:
            roots = polynomial_congruence(mpoly, p) if field.degree > 1 else [
                int(-sympy.Rational(field.min_poly[0]) % p)
            ]
            if roots:
                return ModularContext(field, int(p), int(min(roots)))
        p = sympy.nextprime(p)


def modular_context(field: NumberField, rng: random.Random | None = None) -> ModularContext:
    """A context over a prime above 2^61; ``rng`` selects among primes."""
    offset = 0 if rng is None else rng.randrange(1, 2**40)
    return _context_for(field, _PRIME_FLOOR + offset)


def mod_det(M, p: int) -> int:
    """Determinant modulo p by Gaussian elimination."""
    A = [list(r) for r in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            if f:
                A[r] = [(a - f * b) % p for a, b in zip(A[r], A[c])]
    return det % p
