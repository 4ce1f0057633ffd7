"""Exact combinatorics and flat geometry of horizontally periodic surfaces.

The package enumerates stable cylinder decompositions of translation
surfaces through a permutation encoding of their horizontal saddle
connections, reconstructs flat surfaces from the combinatorics, applies
exact deformations (twists, shears, moving one cone point relative to the
other), and evaluates the arithmetic constraints that rank-one orbit
closures impose on cylinder circumferences and heights.
"""

from cyldec.quadfield import (
    MixedDiscriminants,
    QuadNum,
    Scalar,
    ZeroValue,
    format_scalar,
    parse_scalar,
    scalar_floor,
    scalar_sign,
    sqrt_disc,
)

__all__ = [
    "MixedDiscriminants",
    "QuadNum",
    "Scalar",
    "ZeroValue",
    "format_scalar",
    "parse_scalar",
    "scalar_floor",
    "scalar_sign",
    "sqrt_disc",
]

__version__ = "0.1.0"
