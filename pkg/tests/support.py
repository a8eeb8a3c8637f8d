"""Shared helpers for the test suite."""
import os
import random
from functools import cache

from hypothesis import HealthCheck, seed, settings

from jacobian_forms import Divisor, load_spec
from jacobian_forms.grouplaw import context_from_spec, form_for_divisor
from jacobian_forms.specfile import default_spec_path

SEED = int(os.environ.get("JACOBI_SEED", "20240601"))

settings.register_profile(
    "jacobi",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("jacobi")


def seeded(fn):
    """Pin a hypothesis test to JACOBI_SEED."""
    return seed(SEED)(fn)


def rng(offset: int = 0) -> random.Random:
    return random.Random(SEED + offset)


@cache
def example2():
    return load_spec()


@cache
def toy():
    return load_spec(default_spec_path().parent / "toy.spec")


@cache
def example2_context():
    return context_from_spec(example2())


@cache
def wide_gens():
    return example2().generator_set(["f1", "f2", "g1", "h3", "h4"])


def class_form(D: Divisor):
    return form_for_divisor(example2_context(), D, wide_gens())


def worked_uv():
    """The factorizations of X_D and X_D' written out in the worked example."""
    s = example2()
    f1, f2, g1, g2 = (s.generators[k] for k in ("f1", "f2", "g1", "g2"))
    one = s.curve.one()
    uD = [f2 ** -1, f1, f1 / f2, f2, one]
    vD = [f1 * f2, f2 ** 3, f2 ** 2, f1 * f2 ** 2, f2]
    uD2 = [g1 ** -1, g2, g2 / g1, g2 ** 2 / g1, one]
    vD2 = [g1 * g2, g1 * g2 ** 2, g1 ** 2, g2 * g1 ** 2, g1]
    return uD, vD, uD2, vD2


def small_classes(count: int, offset: int = 0):
    """Random degree-0 divisors on Q'1, Q'3, Q'4, balanced at P."""
    s = example2()
    pts = [s.points[k] for k in ("Q'1", "Q'3", "Q'4")]
    r = rng(offset)
    out = []
    while len(out) < count:
        c = [r.randint(-2, 2) for _ in pts]
        D = Divisor(dict(zip(pts, c))) + Divisor({s.points["P"]: -sum(c)})
        if D and D not in out:
            out.append(D)
    return out
