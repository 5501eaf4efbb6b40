"""Free resolutions of cyclic modules, Tor and Ext.

A cyclic module ``R/I`` is passed as the IdealHandle of I.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..groebner.ideals import INFINITE, IdealHandle, LevelRing
from ..groebner.modules import homology_presentation, kernel, prune_generators
from ..perfect_poly import level_of
from .complexes import FreeComplex


def common_level_ring(*parts) -> LevelRing:
    """Smallest level ring holding every IdealHandle / poly given."""
    rings = [x.ring for x in parts if isinstance(x, IdealHandle)]
    if not rings:
        raise ValueError("need at least one module")
    base = rings[0].base
    if any(r.base != base for r in rings):
        raise ValueError("modules live over different ring presentations")
    lev = max(r.level for r in rings)
    for x in parts:
        if not isinstance(x, IdealHandle) and x is not None:
            for e in x:
                lev = max(lev, level_of(e))
    return LevelRing(base, lev, rings[0].budget)


def _encode_matrix(mat, ring: LevelRing):
    return [[ring.encode(e) for e in row] for row in mat]


def _decode_vec(vec, ring: LevelRing):
    return [ring.decode(v) for v in vec]


def free_resolution(M: IdealHandle, cap: int | None = None) -> FreeComplex:
    """Resolution of ring/I by iterated syzygies, computed through F_cap.

    Exact in degrees 1..cap-1; the last map d_cap is the full syzygy module of
    d_{cap-1}, so the complex is exact at F_{cap-1} as well.
    """
    ring = M.ring
    if cap is None:
        cap = ring.nvars + 1
    rels = ring.rescaled_relations
    enc = [ring.encode(g) for g in M.generators]
    gens = prune_generators([[g] for g in enc if g], 1, ring.nvars, ring.p, rels, ring.budget)
    ranks = [1]
    diffs = []
    if not gens or cap < 1:
        return FreeComplex(ring, ranks, diffs)
    # d_1 is a 1 x k row
    current = [[v[0] for v in gens]]
    while True:
        ncols = len(current[0])
        diffs.append([[ring.decode(e) for e in row] for row in current])
        ranks.append(ncols)
        if len(diffs) >= cap:
            break
        syz = kernel(current, ncols, ring.nvars, ring.p, rels, ring.budget)
        if not syz:
            break
        current = [[s[r] for s in syz] for r in range(ncols)]
    return FreeComplex(ring, ranks, diffs)


@dataclass(frozen=True)
class HomologyResult:
    """ker/im at one index, presented as R^s / relations."""

    index: int
    level: int
    dimension: object  # int or INFINITE
    generators: tuple = ()
    relations: tuple = ()

    @property
    def is_zero(self) -> bool:
        return self.dimension == 0

    def to_dict(self) -> dict:
        dim = self.dimension
        return {
            "index": self.index,
            "level": self.level,
            "dimension": "inf" if dim == INFINITE else dim,
            "zero": self.is_zero,
            "generators": [[str(e) for e in g] for g in self.generators],
            "relations": [[str(e) for e in r] for r in self.relations],
        }


TorResult = HomologyResult
ExtResult = HomologyResult


def homology_at(d_out, rank: int, d_in_cols, ring: LevelRing, extra=(), index: int = 0) -> HomologyResult:
    """ker(d_out) / span(d_in_cols) inside (R/(J + extra))^rank.

    ``d_out`` is a list of rows of length ``rank`` (may be empty: the zero map),
    ``d_in_cols`` a list of vectors of length ``rank``.
    """
    if rank == 0:
        return HomologyResult(index, ring.level, 0)
    rels = [r for r in ring.rescaled_relations if r] + [ring.encode(e) for e in extra]
    rels = [r for r in rels if r]
    nv, p = ring.nvars, ring.p
    if d_out:
        ker = kernel(_encode_matrix(d_out, ring), rank, nv, p, rels, ring.budget)
    else:
        zero = tuple([0] * nv)
        ker = [[{zero: 1} if k == i else {} for k in range(rank)] for i in range(rank)]
    if not ker:
        return HomologyResult(index, ring.level, 0)
    image = [[ring.encode(e) for e in col] for col in d_in_cols]
    N = homology_presentation(ker, image, rank, nv, p, rels, ring.budget)
    dim = N.quotient_dimension()
    if dim is None:
        dim = INFINITE
    gens = tuple(tuple(_decode_vec(k, ring)) for k in ker)
    relations = tuple(tuple(_decode_vec(g, ring)) for g in N.gens if any(g))
    return HomologyResult(index, ring.level, dim, gens, relations)


def chain_homology(C: FreeComplex, i: int, extra=()) -> HomologyResult:
    """H_i(C (x) R/(extra))."""
    ring = C.ring
    d_out = C.d(i) if i >= 1 else []
    d_in = C.d(i + 1)
    cols = [[d_in[r][c] for r in range(C.rank(i))] for c in range(C.rank(i + 1))]
    return homology_at(d_out, C.rank(i), cols, ring, extra, i)


def cochain_homology(C: FreeComplex, i: int, extra=()) -> HomologyResult:
    """H^i(Hom(C, R/(extra))); the coboundary from degree i is d_{i+1} transposed."""
    ring = C.ring
    d_next = C.d(i + 1)
    # transpose: rows indexed by F_{i+1} basis, columns by F_i basis
    d_out = [[d_next[r][c] for r in range(C.rank(i))] for c in range(C.rank(i + 1))]
    d_prev = C.d(i) if i >= 1 else []
    # image of delta^{i-1} = d_i^T: its columns are the rows of d_i
    cols = [list(row) for row in d_prev] if i >= 1 else []
    return homology_at(d_out, C.rank(i), cols, ring, extra, i)


def _prepare(M: IdealHandle, N: IdealHandle, level: int | None):
    if level is not None:
        M, N = M.at_level(max(level, M.ring.level)), N.at_level(max(level, N.ring.level))
    ring = common_level_ring(M, N)
    return IdealHandle(ring, M.generators), IdealHandle(ring, N.generators), ring


def tor(M: IdealHandle, N: IdealHandle, i: int, level: int | None = None) -> HomologyResult:
    """Tor_i(R/I_M, R/I_N) from a resolution of the first argument."""
    M, N, ring = _prepare(M, N, level)
    F = free_resolution(M, cap=i + 1)
    if i > F.length:
        return HomologyResult(i, ring.level, 0)
    return chain_homology(F, i, N.generators)


def ext(M: IdealHandle, N: IdealHandle, i: int, level: int | None = None) -> HomologyResult:
    """Ext^i(R/I_M, R/I_N) from a resolution of the first argument."""
    M, N, ring = _prepare(M, N, level)
    F = free_resolution(M, cap=i + 1)
    if i > F.length:
        return HomologyResult(i, ring.level, 0)
    return cochain_homology(F, i, N.generators)
