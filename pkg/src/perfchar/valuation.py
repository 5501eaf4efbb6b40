"""Z[1/p]-valued valuation on one-variable perfect closures, and kernel recovery for chains."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MultiVariable, RelationViolated
from .perfect_poly import PerfPoly, pth_root


@dataclass(frozen=True, order=True)
class ValuationValue:
    """A finite value in Z[1/p], or infinity (the value of 0)."""

    infinite: bool
    value: Fraction = Fraction(0)

    @classmethod
    def infinity(cls) -> "ValuationValue":
        return cls(True, Fraction(0))

    @classmethod
    def finite(cls, v) -> "ValuationValue":
        return cls(False, Fraction(v))

    def __str__(self):
        if self.infinite:
            return "inf"
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __add__(self, other: "ValuationValue") -> "ValuationValue":
        if self.infinite or other.infinite:
            return ValuationValue.infinity()
        return ValuationValue.finite(self.value + other.value)


def perfect_valuation(f: PerfPoly, truncation: Fraction | int | None = None) -> ValuationValue:
    """Least exponent among the terms of f.

    With ``truncation`` t the element is read modulo (x^t): terms of exponent
    >= t are dropped, and the value saturates at infinity.
    """
    if len(f.variables) != 1:
        raise MultiVariable("valuation is defined on one-variable perfect closures only")
    exps = [m[0] for m, _ in f.terms]
    if truncation is not None:
        exps = [e for e in exps if e < Fraction(truncation)]
    if not exps:
        return ValuationValue.infinity()
    return ValuationValue.finite(min(exps))


def chain_step(x: PerfPoly, p: int, k: int) -> PerfPoly:
    """x^((p-1)/p^k)."""
    return pth_root(x ** (p - 1), k)


def build_chain(a_N: PerfPoly, x: PerfPoly, p: int, N: int) -> tuple:
    """(a_1, ..., a_N) from a_N by a_k = x^((p-1)/p^k) a_{k+1}."""
    chain = [a_N]
    for k in range(N - 1, 0, -1):
        chain.append(chain_step(x, p, k) * chain[-1])
    return tuple(reversed(chain))


def geometric_bound(p: int, N: int) -> Fraction:
    """sum_{i=1}^{N-1} (p-1)/p^i = 1 - p^-(N-1)."""
    return 1 - Fraction(1, p ** (N - 1))


@dataclass(frozen=True)
class ChainReport:
    p: int
    N: int
    v_a1: ValuationValue
    bound: Fraction
    bound_holds: bool
    tight: bool
    recovered: PerfPoly | None

    def to_dict(self) -> dict:
        b = self.bound
        return {
            "p": self.p,
            "N": self.N,
            "v_a1": str(self.v_a1),
            "bound": f"{b.numerator}/{b.denominator}" if b.denominator != 1 else str(b.numerator),
            "bound_holds": self.bound_holds,
            "tight": self.tight,
            "recovered": None if self.recovered is None else str(self.recovered),
        }


def ext1_chain_recovery(a, p: int, x: PerfPoly) -> ChainReport:
    """Check the relations, the bound v(a_1) >= 1 - p^-(N-1), and recover a = a_1 / x when possible.

    The recovered a satisfies a * x^(1/p^(k-1)) = a_k for every k.
    """
    a = list(a)
    N = len(a)
    for k in range(1, N):
        if a[k - 1] != chain_step(x, p, k) * a[k]:
            raise RelationViolated(k)
    v = perfect_valuation(a[0])
    bound = geometric_bound(p, N)
    holds = v.infinite or v.value >= bound
    tight = not v.infinite and v.value == bound
    recovered = None
    if not v.infinite and v.value >= 1:
        r = divide_by_monomial(a[0], x)
        if r is not None and all(r * pth_root(x, k - 1) == a[k - 1] for k in range(1, N + 1)):
            recovered = r
    elif v.infinite:
        recovered = a[0]
    return ChainReport(p, N, v, bound, holds, tight, recovered)


def divide_by_monomial(f: PerfPoly, x: PerfPoly) -> PerfPoly | None:
    """f / x when x is a monomial dividing every term of f; None otherwise."""
    if len(x.terms) != 1:
        return None
    (mx, cx), = x.terms
    inv = pow(cx, -1, f.char.p)
    out = {}
    for m, c in f.terms:
        q = tuple(a - b for a, b in zip(m, mx))
        if any(e < 0 for e in q):
            return None
        out[q] = c * inv
    return PerfPoly(f.char, f.variables, out)
