"""Truncated resolutions of colimit ideals and windowed vanishing tests.

Everything here is a finite window onto a non-noetherian object: reports
carry the window they were checked in and only speak about sampled elements.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..groebner.ideals import (
    ColimitIdeal,
    IdealHandle,
    LevelRing,
    RingPresentation,
    colimit_membership,
    intersection,
)
from ..perfect_poly import PerfPoly, level_of, pth_root
from .complexes import FreeComplex, complex_check, matmul, tensor_total_complex


@dataclass(frozen=True)
class RootTowerTruncation:
    """Y_N: F_1 -> F_0 (1 x N) and X_N: F_2 -> F_1 (N x N-1) for the root x.

    Y_N[0][k] = x^(1/p^k); column k of X_N is e_k - x^((p-1)/p^(k+1)) e_(k+1).
    """

    x: PerfPoly
    p: int
    N: int
    X: tuple
    Y: tuple

    def step(self, k: int) -> PerfPoly:
        """x^((p-1)/p^k)."""
        return pth_root(self.x ** (self.p - 1), k)

    def composite_is_zero(self) -> bool:
        prod = matmul([list(r) for r in self.Y], [list(r) for r in self.X], self.x.zero(self.x.char, self.x.variables))
        return all(not e for row in prod for e in row)

    def level(self) -> int:
        return level_of(self.x) + self.N

    def as_complex(self, base: RingPresentation | None = None) -> FreeComplex:
        if base is None:
            base = RingPresentation(self.p, self.x.variables, ())
        ring = LevelRing(base, self.level())
        return FreeComplex(ring, (1, self.N, self.N - 1), ([list(r) for r in self.Y], [list(r) for r in self.X]))


def root_tower_complex(x: PerfPoly, N: int) -> RootTowerTruncation:
    if N < 1:
        raise ValueError("truncation N must be at least 1")
    p = x.char.p
    zero = PerfPoly.zero(x.char, x.variables)
    one = PerfPoly.one(x.char, x.variables)
    Y = (tuple(pth_root(x, k) for k in range(N)),)
    X = [[zero] * (N - 1) for _ in range(N)]
    xp1 = x ** (p - 1)
    for k in range(N - 1):
        X[k][k] = one
        X[k + 1][k] = -pth_root(xp1, k + 1)
    T = RootTowerTruncation(x, p, N, tuple(tuple(r) for r in X), Y)
    if not T.composite_is_zero():
        raise AssertionError("Y X != 0")
    return T


@dataclass(frozen=True)
class ExactnessWitness:
    ok: bool
    preimage: tuple = ()
    failing_index: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _apply(mat, vec, zero):
    return [sum((e * v for e, v in zip(row, vec) if e and v), zero) for row in mat]


def root_tower_exactness_witness(a, T: RootTowerTruncation) -> ExactnessWitness:
    """Preimage b with X b = a by back-substitution, or the index where it fails."""
    a = list(a)
    if len(a) != T.N:
        raise ValueError(f"tuple has length {len(a)}, truncation has N = {T.N}")
    zero = PerfPoly.zero(T.x.char, T.x.variables)
    if _apply(T.Y, a, zero)[0]:
        return ExactnessWitness(False, (), None, "precondition violated: Y a != 0")
    if T.N == 1:
        return ExactnessWitness(True, ())
    b = [a[0]]
    for k in range(1, T.N - 1):
        b.append(a[k] + T.step(k) * b[k - 1])
    residual = a[T.N - 1] + T.step(T.N - 1) * b[T.N - 2]
    if residual:
        return ExactnessWitness(False, (), T.N - 1, "support escapes the truncation window")
    if _apply(T.X, b, zero) != a:
        raise AssertionError("back-substitution produced a wrong preimage")
    return ExactnessWitness(True, tuple(b))


def random_element(variables, char, rng: random.Random, max_level: int = 2, terms: int = 3) -> PerfPoly:
    p = char.p if hasattr(char, "p") else char
    out = {}
    for _ in range(rng.randint(1, terms)):
        lev = rng.randint(0, max_level)
        den = p ** lev
        mono = tuple(Fraction(rng.randint(0, 2 * den), den) for _ in variables)
        out[mono] = (out.get(mono, 0) + rng.randint(1, p - 1)) % p
    return PerfPoly(char, variables, {m: c for m, c in out.items() if c})


def sample_kernel_tuples(T: RootTowerTruncation, count: int, seed: int = 0):
    """Kernel elements a = X b for random b supported away from the last column."""
    rng = random.Random(seed)
    zero = PerfPoly.zero(T.x.char, T.x.variables)
    out = []
    while len(out) < count:
        b = [zero] * (T.N - 1)
        support = max(1, T.N - 2)
        for k in rng.sample(range(support), min(support, rng.randint(1, 3))):
            b[k] = random_element(T.x.variables, T.x.char, rng)
        a = _apply(T.X, b, zero)
        if any(a):
            out.append((tuple(b), tuple(a)))
    return out


@dataclass(frozen=True)
class VanishReport:
    left: str
    right: str
    level: int
    max_slack: int
    total: int
    found: int
    observed_slack: int | None
    rows: tuple = field(default=())

    @property
    def rate(self) -> Fraction:
        return Fraction(self.found, self.total) if self.total else Fraction(1)

    @property
    def all_found(self) -> bool:
        return self.found == self.total

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "level": self.level,
            "window": [self.level, self.level + self.max_slack],
            "samples": self.total,
            "found": self.found,
            "found_rate": str(self.rate),
            "max_slack_observed": self.observed_slack,
            "rows": [dict(r) for r in self.rows],
        }


def sample_intersection(I: ColimitIdeal, J: ColimitIdeal, level: int, count: int, seed: int = 0):
    """Generators of I_n cap J_n first, then seeded combinations of them."""
    ring = LevelRing(I.ring, level)
    inter = intersection(IdealHandle(ring, I.generators_at(level)), IdealHandle(ring, J.generators_at(level)))
    gens = [g for g in inter.generators if g]
    if not gens:
        return []
    rng = random.Random(seed)
    out = list(gens[:count])
    char, variables = ring.base.char, ring.vars
    while len(out) < count:
        f = PerfPoly.zero(char, variables)
        for g in rng.sample(gens, min(len(gens), rng.randint(1, 2))):
            f = f + random_element(variables, char, rng, max_level=level, terms=2) * g
        if f and level_of(f) <= level:
            out.append(f)
    return out


def vanish_check(I: ColimitIdeal, J: ColimitIdeal, samples: int = 20, max_slack: int = 4,
                 level: int = 0, seed: int = 0) -> VanishReport:
    """Sampled elements of I_n cap J_n searched in (I J)_m for n <= m <= n + max_slack."""
    rows = []
    found = 0
    slack = None
    elems = sample_intersection(I, J, level, samples, seed)
    for f in elems:
        res = colimit_membership(f, I, J, max_level=level + max_slack, min_level=level)
        row = {"element": str(f), "found": res.found}
        if res.found:
            found += 1
            s = res.level - level
            row["level"] = res.level
            slack = s if slack is None else max(slack, s)
        rows.append(row)
    return VanishReport(str(I), str(J), level, max_slack, len(elems), found, slack, tuple(rows))


@dataclass(frozen=True)
class PdimReport:
    bound: int
    length: int
    window: int
    d_squared_zero: bool
    kernel_samples: int
    kernel_recovered: int
    tor_reports: tuple = ()

    @property
    def passed(self) -> bool:
        return (self.length <= self.bound and self.d_squared_zero
                and self.kernel_recovered == self.kernel_samples
                and all(r.all_found for r in self.tor_reports))

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "length": self.length,
            "window": self.window,
            "d_squared_zero": self.d_squared_zero,
            "kernel_samples": self.kernel_samples,
            "kernel_recovered": self.kernel_recovered,
            "tor1_checks": [r.to_dict() for r in self.tor_reports],
            "passed": self.passed,
        }


def perfection_pdim_bound(relations, base: RingPresentation, window: int = 6, samples: int = 10,
                          seed: int = 0, max_slack: int = 4) -> tuple[PdimReport, FreeComplex]:
    """Tensor the truncated resolutions of each (f_i^inf) and test them in the window.

    Checks d^2 = 0, kernel recovery on each factor, and the pairwise Tor_1
    samples (f_i^inf) cap sum_{j<i}(f_j^inf) in the product.
    """
    fs = [base.poly(f) if isinstance(f, str) else f for f in relations]
    m = len(fs)
    if m == 0:
        C = FreeComplex(LevelRing(base, 0), (1,), ())
        return PdimReport(0, 0, window, True, 0, 0), C
    truncs = [root_tower_complex(f, window) for f in fs]
    complexes = [T.as_complex(base) for T in truncs]
    total = tensor_total_complex(complexes)
    ok = complex_check(total)
    kernel_total = 0
    recovered = 0
    for i, T in enumerate(truncs):
        for b, a in sample_kernel_tuples(T, samples, seed + i):
            kernel_total += 1
            w = root_tower_exactness_witness(a, T)
            if w.ok and list(w.preimage) == list(b):
                recovered += 1
    tor_reports = []
    for i in range(1, m):
        left = ColimitIdeal(base, (fs[i],))
        right = ColimitIdeal(base, tuple(fs[:i]))
        tor_reports.append(vanish_check(left, right, samples, max_slack, 0, seed + i))
    return PdimReport(2 * m, total.length, window, ok, kernel_total, recovered, tuple(tor_reports)), total
