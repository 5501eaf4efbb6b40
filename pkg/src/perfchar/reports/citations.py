"""Registered statements that report rows may cite.

Every numeric row in a report names exactly one tag from CITATIONS.  Rows
whose value was computed here cite the computation that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Citation:
    tag: str
    kind: str  # "theorem" or "computation"
    statement: str
    hypotheses: str = ""


CITATIONS = {
    c.tag: c
    for c in (
        Citation(
            "perfection-gldim-upper-bound",
            "theorem",
            "global dimension of the perfect closure is at most 2 dim R + 1",
            "R a complete local domain of prime characteristic",
        ),
        Citation(
            "coherent-perfection-dimensions",
            "theorem",
            "if the perfect closure is coherent and R is not a field: gl.dim = dim R + 1 and w.dim = dim R",
            "R a complete local domain of prime characteristic with coherent perfect closure",
        ),
        Citation(
            "one-dimensional-coherence-dichotomy",
            "theorem",
            "in dimension one the perfect closure is either a valuation ring (gl.dim 2, w.dim 1) "
            "or non-coherent with gl.dim 3",
            "R a one-dimensional complete local domain of prime characteristic",
        ),
        Citation(
            "zero-dimensional-perfection-is-field",
            "theorem",
            "a zero-dimensional local ring is F-coherent; its perfect closure is a field",
            "R local and zero-dimensional",
        ),
        Citation(
            "node-perfection-dimensions",
            "theorem",
            "the perfect closure of the local ring of F_p[X,Y]/(XY) at the origin has "
            "gl.dim 3, w.dim 2 and dimension 1",
        ),
        Citation(
            "cusp-family-characteristic-split",
            "theorem",
            "for F_p[t, t sqrt(t+1)]: gl.dim of the perfect closure is 2 and w.dim 1 when p = 2, "
            "otherwise gl.dim 3 and w.dim 2",
        ),
        Citation(
            "purely-inseparable-coherence-criterion",
            "theorem",
            "a one-dimensional reduced ring is F-coherent iff its normalization is purely inseparable over it",
        ),
        Citation(
            "krull-dimension-of-initial-ideal",
            "computation",
            "Krull dimension read off the leading-term ideal of a Groebner basis",
        ),
        Citation(
            "subalgebra-membership-search",
            "computation",
            "least n with s^(p^n) in the subalgebra generated by the embedding images, by elimination",
        ),
    )
}


def cite(tag: str) -> str:
    if tag not in CITATIONS:
        raise KeyError(f"unregistered citation tag {tag!r}")
    return tag


def row(quantity: str, value, tag: str) -> dict:
    """A report row; its source label follows the kind of the cited entry."""
    c = CITATIONS[cite(tag)]
    return {
        "quantity": quantity,
        "value": value,
        "source": "computed" if c.kind == "computation" else "cited",
        "citation": tag,
    }
