"""Finite complexes of free modules over level rings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from ..groebner.ideals import LevelRing, RingPresentation
from ..perfect_poly import PerfPoly, level_of, parse_poly

SCHEMA = "perfchar/1"


def zero_matrix(ring: LevelRing, rows: int, cols: int):
    z = ring.base.zero()
    return [[z] * cols for _ in range(rows)]


def matmul(A, B, zero: PerfPoly):
    """Product of PerfPoly matrices, skipping zero entries."""
    if not A or not B:
        rows = len(A)
        cols = len(B[0]) if B else 0
        return [[zero] * cols for _ in range(rows)]
    inner = len(B)
    cols = len(B[0])
    out = []
    nz_b = [[(j, B[k][j]) for j in range(cols) if B[k][j]] for k in range(inner)]
    for row in A:
        acc = [zero] * cols
        for k, a in enumerate(row):
            if not a:
                continue
            for j, b in nz_b[k]:
                acc[j] = acc[j] + a * b
        out.append(acc)
    return out


def transpose(A, nrows: int | None = None, ncols: int | None = None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


@dataclass(frozen=True)
class FreeComplex:
    """F_N -> ... -> F_1 -> F_0 with ``differentials[i-1]`` the matrix of d_i.

    d_i has ``ranks[i-1]`` rows and ``ranks[i]`` columns.
    """

    ring: LevelRing
    ranks: tuple
    differentials: tuple

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "differentials", tuple(tuple(tuple(r) for r in d) for d in self.differentials))
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ValueError("need one differential per consecutive pair of ranks")
        for i, d in enumerate(self.differentials, start=1):
            rows, cols = self.ranks[i - 1], self.ranks[i]
            if len(d) != rows or any(len(r) != cols for r in d):
                raise ValueError(f"d_{i} has wrong shape for ranks {rows} x {cols}")

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def d(self, i: int):
        """Matrix of d_i; zero matrices outside the stored range."""
        if 1 <= i <= self.length:
            return [list(r) for r in self.differentials[i - 1]]
        rows = self.rank(i - 1)
        cols = self.rank(i)
        return [[self.ring.base.zero()] * cols for _ in range(rows)]

    def rank(self, i: int) -> int:
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def entries(self):
        for d in self.differentials:
            for row in d:
                yield from row

    def max_level(self) -> int:
        return max([level_of(e) for e in self.entries()] + [0])

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "ring": self.ring.base.to_dict(),
            "level": self.ring.level,
            "ranks": list(self.ranks),
            "differentials": [[str(e) for row in d for e in row] for d in self.differentials],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "FreeComplex":
        base = RingPresentation.from_dict(data["ring"])
        ring = LevelRing(base, int(data["level"]))
        ranks = list(data["ranks"])
        diffs = []
        for i, flat in enumerate(data["differentials"], start=1):
            rows, cols = ranks[i - 1], ranks[i]
            if len(flat) != rows * cols:
                raise ValueError(f"d_{i}: expected {rows * cols} entries, got {len(flat)}")
            ents = [parse_poly(t, base.char, base.vars) for t in flat]
            diffs.append([ents[r * cols:(r + 1) * cols] for r in range(rows)])
        return cls(ring, ranks, diffs)

    @classmethod
    def from_json(cls, text: str) -> "FreeComplex":
        return cls.from_dict(json.loads(text))


def complex_check(C: FreeComplex) -> bool:
    """True iff d_{i-1} d_i = 0 for all i (exactly, modulo the ring relations)."""
    zero = C.ring.base.zero()
    ring = C.ring
    lev = max(ring.level, C.max_level())
    if lev != ring.level:
        ring = LevelRing(ring.base, lev, ring.budget)
    has_rel = bool(ring.base.relations)
    for i in range(2, C.length + 1):
        prod = matmul(C.d(i - 1), C.d(i), zero)
        for row in prod:
            for e in row:
                if e and (not has_rel or not ring.is_zero(e)):
                    return False
    return True


def koszul_complex(seq, ring: LevelRing) -> FreeComplex:
    """Koszul complex on seq; basis of F_k is the k-subsets in lexicographic order.

    d(e_S) = sum_j (-1)^j x_{s_j} e_{S - s_j} with j the position of s_j in S.
    """
    seq = list(seq)
    n = len(seq)
    zero = ring.base.zero()
    bases = [list(combinations(range(n), k)) for k in range(n + 1)]
    index = [{S: i for i, S in enumerate(b)} for b in bases]
    diffs = []
    for k in range(1, n + 1):
        rows, cols = len(bases[k - 1]), len(bases[k])
        d = [[zero] * cols for _ in range(rows)]
        for c, S in enumerate(bases[k]):
            for pos, s in enumerate(S):
                T = S[:pos] + S[pos + 1:]
                entry = seq[s] if pos % 2 == 0 else -seq[s]
                d[index[k - 1][T]][c] = entry
        diffs.append(d)
    return FreeComplex(ring, tuple(len(b) for b in bases), diffs)


def tensor_total_complex(complexes) -> FreeComplex:
    """Total complex of the tensor product.

    Degree-n basis: pairs (i, a, b) with i + j = n ordered by i, then a, then b.
    d(a (x) b) = d(a) (x) b + (-1)^i a (x) d(b) for a in degree i.
    """
    complexes = list(complexes)
    if not complexes:
        raise ValueError("need at least one complex")
    result = complexes[0]
    for other in complexes[1:]:
        result = _tensor_pair(result, other)
    return result


def _tensor_pair(A: FreeComplex, B: FreeComplex) -> FreeComplex:
    if A.ring.base != B.ring.base:
        raise ValueError("complexes over different rings")
    ring = A.ring if A.ring.level >= B.ring.level else B.ring
    zero = ring.base.zero()
    top = A.length + B.length
    basis = []
    for n in range(top + 1):
        b = []
        for i in range(max(0, n - B.length), min(A.length, n) + 1):
            j = n - i
            for a in range(A.rank(i)):
                for c in range(B.rank(j)):
                    b.append((i, a, c))
        basis.append(b)
    index = [{t: k for k, t in enumerate(b)} for b in basis]
    diffs = []
    for n in range(1, top + 1):
        rows, cols = len(basis[n - 1]), len(basis[n])
        d = [[zero] * cols for _ in range(rows)]
        for col, (i, a, c) in enumerate(basis[n]):
            j = n - i
            if i >= 1:
                dA = A.d(i)
                for r in range(A.rank(i - 1)):
                    e = dA[r][a]
                    if e:
                        d[index[n - 1][(i - 1, r, c)]][col] = d[index[n - 1][(i - 1, r, c)]][col] + e
            if j >= 1:
                dB = B.d(j)
                sign = -1 if i % 2 else 1
                for r in range(B.rank(j - 1)):
                    e = dB[r][c]
                    if e:
                        d[index[n - 1][(i, a, r)]][col] = d[index[n - 1][(i, a, r)]][col] + e.scale(sign)
        diffs.append(d)
    return FreeComplex(ring, tuple(len(b) for b in basis), diffs)
