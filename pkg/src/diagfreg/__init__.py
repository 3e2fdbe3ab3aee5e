"""Exact computations with Frobenius splittings, Cartier maps and diagonal
Cartier algebras over prime fields."""

from diagfreg.fields import is_prime, inv_mod
from diagfreg.polynomial import PolyRing, Polynomial, VarId, frobenius_power
from diagfreg.linalg import FpMatrix, Inconsistent, solve_linear
from diagfreg.groebner import (
    IdealHandle,
    MonomialOrder,
    colon,
    colon_saturation,
    groebner_basis,
    ideal_containment,
    ideal_membership,
    ideal_power,
)
from diagfreg.cartier import (
    CartierMap,
    FrobDecomp,
    cartier_apply,
    cartier_compose,
    frob_decompose,
    frobenius_trace,
    ideal_compatible,
    right_multiply,
)

__version__ = "0.1.0"

__all__ = [
    "CartierMap",
    "FpMatrix",
    "FrobDecomp",
    "IdealHandle",
    "Inconsistent",
    "MonomialOrder",
    "PolyRing",
    "Polynomial",
    "VarId",
    "cartier_apply",
    "cartier_compose",
    "colon",
    "colon_saturation",
    "frob_decompose",
    "frobenius_power",
    "frobenius_trace",
    "groebner_basis",
    "ideal_compatible",
    "ideal_containment",
    "ideal_membership",
    "ideal_power",
    "inv_mod",
    "is_prime",
    "right_multiply",
    "solve_linear",
]
