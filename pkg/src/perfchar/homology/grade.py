"""Koszul, Čech and Ext grades of a sequence on a cyclic module."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..groebner.ideals import INFINITE, IdealHandle
from ..groebner.modules import Submodule
from .complexes import koszul_complex
from .resolution import cochain_homology, common_level_ring, free_resolution


@dataclass(frozen=True)
class GradeResult:
    value: object  # int or INFINITE
    window: int
    method: str
    inconclusive: bool = False

    def to_dict(self) -> dict:
        return {
            "value": "inf" if self.value == INFINITE else self.value,
            "window": self.window,
            "method": self.method,
            "inconclusive": self.inconclusive,
        }


def koszul_grade(seq, M: IdealHandle) -> GradeResult:
    """Least i with H^i(Hom(K(seq), M)) != 0; INFINITE when all vanish (seq M = M)."""
    seq = list(seq)
    ring = common_level_ring(M, seq)
    K = koszul_complex(seq, ring)
    for i in range(len(seq) + 1):
        if not cochain_homology(K, i, M.generators).is_zero:
            return GradeResult(i, len(seq), "koszul")
    return GradeResult(INFINITE, len(seq), "koszul")


def ext_grade(I: IdealHandle, M: IdealHandle, window: int | None = None) -> GradeResult:
    """Least i <= window with Ext^i(R/I, M) != 0.

    With the default window (number of generators of I) an all-zero answer is exact.
    """
    ring = common_level_ring(I, M)
    exact_window = len(I.generators)
    if window is None:
        window = exact_window
    F = free_resolution(IdealHandle(ring, I.generators), cap=window + 1)
    for i in range(window + 1):
        if i > F.length:
            break
        if not cochain_homology(F, i, M.generators).is_zero:
            return GradeResult(i, window, "ext")
    return GradeResult(INFINITE, window, "ext", inconclusive=window < exact_window)


def cech_grade(seq, M: IdealHandle, window: int = 2) -> GradeResult:
    """Least i whose Čech class survives from K(x) to K(x^window).

    Classes of H^i(Hom(K(x), M)) are pushed along the transition map
    e_S* -> prod_{j in S} x_j^(window-1) e_S*; a class that survives is
    nonzero in the window.  Indices where every class dies are skipped and
    flag the result as inconclusive.
    """
    seq = list(seq)
    n = len(seq)
    ring = common_level_ring(M, seq)
    if window < 2:
        raise ValueError("window must be at least 2")
    K1 = koszul_complex(seq, ring)
    Kt = koszul_complex([x ** window for x in seq], ring)
    nv, p = ring.nvars, ring.p
    rels = [r for r in ring.rescaled_relations if r] + [g for g in (ring.encode(e) for e in M.generators) if g]
    subsets = [list(combinations(range(n), k)) for k in range(n + 1)]
    inconclusive = False
    for i in range(n + 1):
        h = cochain_homology(K1, i, M.generators)
        if h.is_zero:
            continue
        # image of degree-(i-1) coboundary at the target level: rows of d_i of K_t
        rank = K1.rank(i)
        if i >= 1:
            image = [[ring.encode(e) for e in row] for row in Kt.d(i)]
        else:
            image = []
        target = Submodule(image, rank, nv, p, rels, ring.budget)
        survived = False
        for cocycle in h.generators:
            mapped = []
            for S, entry in zip(subsets[i], cocycle):
                mult = ring.base.one()
                for j in S:
                    mult = mult * seq[j] ** (window - 1)
                mapped.append(ring.encode(entry * mult))
            if not target.contains(mapped):
                survived = True
                break
        if survived:
            return GradeResult(i, window, "cech", inconclusive)
        inconclusive = True
    return GradeResult(INFINITE, window, "cech", inconclusive)

