"""Divisor classes on superelliptic curves as G-forms, the Jacobian group law
on them, and the abstract Abel map, all in exact arithmetic."""

from .basefield import QQ, FieldScalar, NumberField
from .divisors import Divisor, parse_divisor, principal_divisor
from .errors import *
from .funcfield import Curve, FuncElem
from .gform import (
    GForm,
    build_gform,
    extract_divisor,
    k_transform,
    transpose_gform,
    validate_gform,
)
from .grouplaw import (
    JacobianContext,
    add_forms,
    build_compression,
    context_from_spec,
    form_for_divisor,
    group_add,
    group_negate,
    kron,
    reduce_form,
    zero_form,
)
from .localgeom import (
    CurvePoint,
    affine_point,
    expand_at,
    infinity_point,
    ord_at,
    residue_at,
)
from .poly import Poly
from .rrspace import GeneratorSet, lspace_basis
from .specfile import load_spec, parse_spec
from .tensoralg import (
    JacobiMatrix,
    MultiSlotElem,
    abel_map,
    abeliant,
    discriminant,
    jacobi_validate,
    k_proportional,
    slot_embed,
)

__version__ = "0.1.0"
