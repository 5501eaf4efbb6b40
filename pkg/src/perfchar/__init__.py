"""Exact computer algebra for prime-characteristic commutative algebra and perfect closures."""

from .perfect_poly import (
    FpElem,
    PerfPoly,
    PExponent,
    PrimeChar,
    frobenius,
    level_of,
    map_perfection,
    parse_poly,
    pth_root,
    rescale,
)

__version__ = "0.1.0"
