"""Bracket powers, colength sequences and Hilbert-Kunz estimates, all in exact rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfiniteColength, InsufficientRows, NotPPower, SingularSystem
from .groebner.ideals import INFINITE, IdealHandle, colength, krull_dimension
from .perfect_poly import frobenius, p_power_level


def _exponent_of(q: int, p: int) -> int:
    k = p_power_level(q, p) if q >= 1 else None
    if k is None:
        raise NotPPower(f"{q} is not a power of {p}")
    return k


def bracket_power(I: IdealHandle, q: int) -> IdealHandle:
    """The ideal generated by g^q for each generator g."""
    k = _exponent_of(q, I.ring.p)
    return IdealHandle(I.ring, [frobenius(g, k) for g in I.generators])


def peskine_szpiro(M: IdealHandle, n: int) -> IdealHandle:
    """Frobenius pullback of ring/I: ring/I^[p^n]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return bracket_power(M, M.ring.p ** n)


def solve_exact(A, b):
    """Solve the square system A x = b over Q by Gaussian elimination."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularSystem("singular linear system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _ratio_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class HKRow:
    n: int
    q: int
    length: int
    ratio: Fraction

    def to_dict(self) -> dict:
        return {"n": self.n, "q": self.q, "length": self.length, "ratio": _ratio_text(self.ratio)}


@dataclass(frozen=True)
class HKRecord:
    ring: object
    generators: tuple
    d: int
    rows: tuple

    @property
    def p(self) -> int:
        return self.ring.p

    def to_dict(self) -> dict:
        return {
            "ring": self.ring.to_dict(),
            "ideal": [str(g) for g in self.generators],
            "d": self.d,
            "rows": [r.to_dict() for r in self.rows],
        }


def hk_sequence(I: IdealHandle, n_max: int, d: int | None = None) -> HKRecord:
    """Rows (n, q, length of ring/I^[q], length / q^d) for n = 0..n_max."""
    if colength(I) == INFINITE:
        raise InfiniteColength(f"ring/({', '.join(map(str, I.generators))}) is not finite dimensional")
    if d is None:
        d = krull_dimension(IdealHandle(I.ring, []))
    p = I.ring.p
    rows = []
    for n in range(n_max + 1):
        q = p ** n
        length = colength(bracket_power(I, q))
        rows.append(HKRow(n, q, length, Fraction(length, q ** d)))
    return HKRecord(I.ring.base, I.generators, d, tuple(rows))


@dataclass(frozen=True)
class HKEstimate:
    candidate: Fraction | None
    coefficients: tuple  # c_d, ..., c_0 with length = sum c_i q^i
    solved_on: tuple
    residuals: dict = field(default_factory=dict)

    @property
    def inconclusive(self) -> bool:
        return self.candidate is None

    def to_dict(self) -> dict:
        return {
            "candidate": None if self.candidate is None else _ratio_text(self.candidate),
            "inconclusive": self.inconclusive,
            "coefficients": [_ratio_text(c) for c in self.coefficients],
            "solved_on": list(self.solved_on),
            "residuals": {str(n): _ratio_text(r) for n, r in sorted(self.residuals.items())},
        }


def e_hk_estimate(rec: HKRecord) -> HKEstimate:
    """Fit length = sum_{i<=d} c_i q^i on the last rows, verify on the rest.

    A nonzero residual on any verification row with n >= 1 makes the result
    inconclusive.  The n = 0 residual is reported but not required to vanish.
    """
    rows = list(rec.rows)
    if len(rows) < 3:
        raise InsufficientRows(f"need at least 3 rows, got {len(rows)}")
    d = rec.d
    k = max(math.ceil(len(rows) / 2), d + 1)
    if k >= len(rows):
        raise InsufficientRows(f"need more than {d + 1} rows to verify a degree-{d} fit")
    # the last k rows form the solving window; its final d+1 rows fix the square
    # system and the rest of the window must agree exactly
    base_rows = rows[-k:][-(d + 1):]
    A = [[Fraction(r.q) ** i for i in range(d, -1, -1)] for r in base_rows]
    coeffs = solve_exact(A, [r.length for r in base_rows])

    def predict(q):
        return sum(c * Fraction(q) ** i for c, i in zip(coeffs, range(d, -1, -1)))

    residuals = {r.n: r.length - predict(r.q) for r in rows if r not in base_rows}
    ok = all(res == 0 for n, res in residuals.items() if n >= 1)
    cand = coeffs[0] if ok else None
    return HKEstimate(cand, tuple(coeffs), tuple(r.n for r in base_rows), residuals)


@dataclass(frozen=True)
class SeibertFit:
    p: int
    coefficients: tuple  # b_0 .. b_D
    fitted_on: tuple
    residuals: dict

    @property
    def exact(self) -> bool:
        return all(r == 0 for r in self.residuals.values())

    def predict(self, n: int) -> Fraction:
        return sum(b * Fraction(self.p) ** (i * n) for i, b in enumerate(self.coefficients))

    def to_dict(self) -> dict:
        return {
            "coefficients": [_ratio_text(b) for b in self.coefficients],
            "fitted_on": list(self.fitted_on),
            "residuals": {str(n): _ratio_text(r) for n, r in sorted(self.residuals.items())},
            "exact": self.exact,
        }


def seibert_fit(lengths, p: int, D: int, start: int = 0) -> SeibertFit:
    """Solve value_n = sum_{i<=D} b_i p^(i n) on the first D+1 points, check the rest.

    ``lengths`` is either a sequence indexed from ``start`` or a mapping n -> value.
    """
    if isinstance(lengths, dict):
        data = sorted(lengths.items())
    else:
        data = [(start + i, v) for i, v in enumerate(lengths)]
    if len(data) < D + 2:
        raise InsufficientRows(f"need at least {D + 2} points, got {len(data)}")
    fit, check = data[:D + 1], data[D + 1:]
    A = [[Fraction(p) ** (i * n) for i in range(D + 1)] for n, _ in fit]
    b = solve_exact(A, [v for _, v in fit])
    out = SeibertFit(p, tuple(b), tuple(n for n, _ in fit), {})
    residuals = {n: Fraction(v) - out.predict(n) for n, v in check}
    return SeibertFit(p, tuple(b), out.fitted_on, residuals)


def euler_characteristic_sequence(M: IdealHandle, N: IdealHandle, n_range, top: int | None = None):
    """chi_n = sum_i (-1)^i length Tor_i(F^n(ring/I_M), ring/I_N) for n in n_range."""
    from .homology.resolution import tor

    top = M.ring.nvars if top is None else top
    out = {}
    for n in n_range:
        Fm = peskine_szpiro(M, n)
        chi = 0
        for i in range(top + 1):
            dim = tor(Fm, N, i).dimension
            if dim == INFINITE:
                raise InfiniteColength(f"Tor_{i} is infinite dimensional at n={n}")
            chi += (-1) ** i * dim
        out[n] = chi
    return out
