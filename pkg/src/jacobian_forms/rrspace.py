"""Bases of Riemann-Roch spaces L(D) built from monomials in generators with known divisors."""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .divisors import Divisor, principal_divisor
from .errors import InsufficientGenerators, PreconditionError, SpecError
from .funcfield import FuncElem, KEchelon, _coord_vectors
from .localgeom import CurvePoint

__all__ = ["GeneratorSet", "LBasis", "dominant_point", "lspace_basis", "monomial"]


@dataclass(frozen=True)
class Generator:
    name: str
    func: FuncElem
    divisor: Divisor


class GeneratorSet:
    """Named functions whose principal divisors over ``universe`` are verified."""

    def __init__(self, universe: Sequence[CurvePoint], gens=(), bounds=None):
        self.universe = list(dict.fromkeys(universe))
        self.gens: list[Generator] = []
        self.bounds = dict(bounds or {})
        for item in gens:
            self.add(*item)

    def add(self, name: str, func: FuncElem, expected: Divisor | None = None) -> Generator:
        div = principal_divisor(func, self.universe)
        if expected is not None and div != expected:
            raise SpecError(f"generator {name}: expected divisor {expected}, computed {div}")
        g = Generator(name, func, div)
        self.gens.append(g)
        return g

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    @property
    def curve(self):
        return self.gens[0].func.curve

    def names(self) -> list:
        return [g.name for g in self.gens]

    def ord_matrix(self) -> np.ndarray:
        """Integer matrix of ord_pt(g) with rows = universe points, cols = generators."""
        return np.array(
            [[g.divisor[pt] for g in self.gens] for pt in self.universe], dtype=np.int64
        ).reshape(len(self.universe), len(self.gens))


@dataclass
class LBasis:
    divisor: Divisor
    elements: list
    exponents: list

    @property
    def dim(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


def dominant_point(D: Divisor) -> CurvePoint | None:
    """Point of largest multiplicity, ties broken by point order."""
    if not D:
        return None
    top = max(D.terms.values())
    return min((pt for pt in D.support() if D[pt] == top), key=CurvePoint.sort_key)


def monomial(gens: GeneratorSet, exps: Sequence[int], _cache=None) -> FuncElem:
    curve = gens.curve
    out = curve.one()
    for g, e in zip(gens.gens, exps):
        if e:
            if _cache is not None:
                key = (g.name, e)
                p = _cache.get(key)
                if p is None:
                    p = _cache[key] = g.func ** e
            else:
                p = g.func ** e
            out = out * p
    return out


def _exponent_grid(ranges) -> np.ndarray:
    axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in ranges]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def lspace_basis(D: Divisor, gens: GeneratorSet, bounds=None) -> LBasis:
    """k-basis of L(D) drawn from monomials in ``gens``.

    Monomials are filtered by div(m) + D >= 0 over the universe, deduplicated
    by divisor, and considered in order of pole order at the dominant point
    of D (ties by total exponent size, then exponent vector) with the
    constant first.  The selected
    basis is returned in reverse selection order, so a constant, when
    present, is the last element.
    """
    curve = gens.curve
    g = curve.genus
    deg = D.degree
    if deg < 2 * g - 1:
        raise PreconditionError(
            f"deg D = {deg} < 2g - 1 = {2 * g - 1}; Riemann-Roch dimension is not determined"
        )
    dim = deg - g + 1
    for pt in D.support():
        if pt not in gens.universe:
            raise SpecError(f"point {pt} of D is not in the declared universe")
    r = len(gens)
    span = max(abs(deg), 1)
    ranges = []
    for gen in gens.gens:
        b = (bounds or {}).get(gen.name) or gens.bounds.get(gen.name) or (-span, span)
        ranges.append(tuple(b))
    grid = _exponent_grid(ranges) if r else np.zeros((1, 0), dtype=np.int64)
    ords = gens.ord_matrix()  # points x gens
    dvec = np.array([D[pt] for pt in gens.universe], dtype=np.int64)
    divs = grid @ ords.T if r else np.zeros((1, len(dvec)), dtype=np.int64)
    ok = np.all(divs + dvec[None, :] >= 0, axis=1)
    grid, divs = grid[ok], divs[ok]

    dom = dominant_point(D)
    col = gens.universe.index(dom) if dom is not None else None
    pole = -divs[:, col] if col is not None else np.zeros(len(grid), dtype=np.int64)
    is_const = ~np.any(divs != 0, axis=1)
    # lexsort keys are given last-major
    weight = np.abs(grid).sum(axis=1)
    keys = [grid[:, j] for j in range(r - 1, -1, -1)] + [weight, pole, ~is_const]
    order = np.lexsort(keys) if len(grid) else np.array([], dtype=np.int64)

    seen = set()
    cache: dict = {}
    chosen, chosen_exps = [], []
    for idx in order:
        dkey = divs[idx].tobytes()
        if dkey in seen:
            continue
        seen.add(dkey)
        exps = tuple(int(v) for v in grid[idx])
        e = monomial(gens, exps, cache)
        if _extends(chosen, e):
            chosen.append(e)
            chosen_exps.append(exps)
            if len(chosen) == dim:
                break
    if len(chosen) < dim:
        raise InsufficientGenerators(
            f"found {len(chosen)} independent members of L({D}); Riemann-Roch requires {dim}"
        )
    return LBasis(D, chosen[::-1], chosen_exps[::-1])


def _extends(chosen, e) -> bool:
    # the common denominator grows as elements arrive, so the echelon is
    # rebuilt over the current lcm; the lists involved are short
    vecs, _ = _coord_vectors(chosen + [e])
    ech = KEchelon()
    for v in vecs[:-1]:
        ech.add(v)
    return ech.add(vecs[-1])
