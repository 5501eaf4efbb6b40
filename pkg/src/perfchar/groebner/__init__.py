"""Groebner bases over level truncations of perfect closures."""

from .core import DEFAULT_PAIR_BUDGET, GroebnerBasis, MonomialOrder
from .ideals import (
    INFINITE,
    ColimitIdeal,
    GBResult,
    IdealHandle,
    LevelRing,
    Membership,
    RegularityResult,
    RingPresentation,
    SearchResult,
    colength,
    colimit_membership,
    colon,
    groebner,
    intersection,
    is_regular_sequence,
    krull_dimension,
    membership,
    product,
    radical_membership,
    subalgebra_membership,
    syzygies,
)
