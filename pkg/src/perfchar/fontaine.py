"""Truncated tilts: length-L sequences r_0, r_1, ... in A/pA with r_{i+1}^p = r_i."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as iproduct

from .errors import ConstraintViolation, ImperfectRing, PresentationError
from .groebner.ideals import IdealHandle, LevelRing, RingPresentation
from .perfect_poly import level_of, pth_root


class ResidueOfIntegers:
    """A = Z/p^k, so A/pA = F_p (elements are ints mod p)."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.perfect = True

    def describe(self) -> str:
        return f"Z/{self.p}^{self.k}"

    def coerce(self, x):
        if isinstance(x, str):
            x = int(x.strip())
        return int(x) % self.p

    def zero(self):
        return 0

    def frob(self, a):
        return pow(a, self.p, self.p)

    def pth_root(self, a):
        return a % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def equal(self, a, b) -> bool:
        return (a - b) % self.p == 0

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def elements(self):
        return range(self.p)

    def fmt(self, a) -> str:
        return str(a)


class PerfectionQuotient:
    """A = (perfection of the presented ring) / (ideal), already of characteristic p.

    Equality is decided at the common level of the elements and the ideal,
    which is exact because each level ring is free over the previous one.
    """

    def __init__(self, base: RingPresentation, ideal=()):
        self.base = base
        self.p = base.p
        self.ideal = tuple(base.poly(g) if isinstance(g, str) else g for g in ideal)
        self.perfect = not self.ideal

    def describe(self) -> str:
        vs = ", ".join(self.base.vars)
        rels = "".join(f", {r}" for r in self.base.relations)
        quo = f"/({', '.join(map(str, self.ideal))})" if self.ideal else ""
        return f"F_{self.p}[{vs}{rels}]^perf{quo}"

    def coerce(self, x):
        return self.base.poly(x) if isinstance(x, str) else x

    def zero(self):
        return self.base.zero()

    def frob(self, a):
        return a ** self.p

    def pth_root(self, a):
        return pth_root(a, 1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        lev = max([level_of(a)] + [level_of(g) for g in self.ideal])
        ring = LevelRing(self.base, lev)
        if not self.ideal:
            return ring.is_zero(a)
        return IdealHandle(ring, self.ideal).contains(a)

    def equal(self, a, b) -> bool:
        return self.is_zero(a - b)

    def fmt(self, a) -> str:
        return str(a)


@dataclass(frozen=True)
class FontaineElement:
    coords: tuple
    tilt: "TiltRing"

    def __add__(self, other):
        return self.tilt.add(self, other)

    def __mul__(self, other):
        return self.tilt.mul(self, other)

    def __eq__(self, other):
        return isinstance(other, FontaineElement) and self.tilt.equal(self, other)

    def __hash__(self):
        return hash(len(self.coords))

    def __str__(self):
        return "(" + ", ".join(self.tilt.residue.fmt(c) for c in self.coords) + ")"


class TiltRing:
    """Length-L truncation of the inverse limit of A/pA along Frobenius."""

    def __init__(self, residue, L: int):
        if L < 1:
            raise ValueError("length must be at least 1")
        self.residue = residue
        self.L = L
        self.p = residue.p

    def describe(self) -> str:
        return f"E_{self.L}({self.residue.describe()})"

    def violation(self, coords) -> int | None:
        """First i with r_{i+1}^p != r_i, or None."""
        R = self.residue
        for i in range(len(coords) - 1):
            if not R.equal(R.frob(coords[i + 1]), coords[i]):
                return i
        return None

    def element(self, coords) -> FontaineElement:
        coords = tuple(self.residue.coerce(c) for c in coords)
        if len(coords) != self.L:
            raise ConstraintViolation(f"expected {self.L} coordinates, got {len(coords)}")
        bad = self.violation(coords)
        if bad is not None:
            raise ConstraintViolation(f"r_{bad + 1}^{self.p} != r_{bad}")
        return FontaineElement(coords, self)

    def from_root(self, r0) -> FontaineElement:
        """The sequence r_i = r_0^(1/p^i), using p-th roots taken in the perfection."""
        r0 = self.residue.coerce(r0)
        coords = [r0]
        for _ in range(self.L - 1):
            coords.append(self.residue.pth_root(coords[-1]))
        return self.element(coords)

    def zero(self) -> FontaineElement:
        return self.from_root(self.residue.zero())

    def add(self, a: FontaineElement, b: FontaineElement) -> FontaineElement:
        R = self.residue
        return self.element([R.add(x, y) for x, y in zip(a.coords, b.coords)])

    def mul(self, a: FontaineElement, b: FontaineElement) -> FontaineElement:
        R = self.residue
        return self.element([R.mul(x, y) for x, y in zip(a.coords, b.coords)])

    def equal(self, a: FontaineElement, b: FontaineElement) -> bool:
        return all(self.residue.equal(x, y) for x, y in zip(a.coords, b.coords))

    def project(self, a: FontaineElement):
        return a.coords[0]

    def enumerate_valid(self):
        """All valid coordinate tuples when A/pA is finite."""
        if not hasattr(self.residue, "elements"):
            raise ValueError("A/pA is not finite")
        out = []
        for coords in iproduct(self.residue.elements(), repeat=self.L):
            if self.violation(coords) is None:
                out.append(FontaineElement(tuple(coords), self))
        return out


def tilt(source, L: int) -> TiltRing:
    """Build the tilt handle from a residue object, a RingPresentation, or a ring JSON dict.

    JSON forms: {"modulus": p^k} for Z/p^k; otherwise a ring presentation
    (char, vars, relations) with an optional "quotient" list of generators.
    """
    if isinstance(source, (ResidueOfIntegers, PerfectionQuotient)):
        return TiltRing(source, L)
    if isinstance(source, RingPresentation):
        return TiltRing(PerfectionQuotient(source), L)
    if isinstance(source, dict):
        if "modulus" in source:
            m = int(source["modulus"])
            p = _prime_of_power(m)
            k = 0
            while m > 1:
                m //= p
                k += 1
            return TiltRing(ResidueOfIntegers(p, k), L)
        base = RingPresentation.from_dict(source)
        return TiltRing(PerfectionQuotient(base, source.get("quotient", ())), L)
    raise PresentationError(f"cannot build a tilt from {type(source).__name__}")


def _prime_of_power(m: int) -> int:
    if m < 2:
        raise PresentationError("modulus must be a prime power >= 2")
    p = next(d for d in range(2, m + 1) if m % d == 0)
    x = m
    while x % p == 0:
        x //= p
    if x != 1:
        raise PresentationError(f"{m} is not a prime power")
    return p


@dataclass(frozen=True)
class ProjectionReport:
    description: str
    samples: int
    surjective_on_samples: int
    injective_on_samples: int

    @property
    def ok(self) -> bool:
        return self.surjective_on_samples == self.samples and self.injective_on_samples == self.samples

    def to_dict(self) -> dict:
        return {
            "tilt": self.description,
            "samples": self.samples,
            "lifted_from_coordinate_0": self.surjective_on_samples,
            "determined_by_coordinate_0": self.injective_on_samples,
            "bijective_on_samples": self.ok,
        }


def projection_check(T: TiltRing, samples: int = 20, seed: int = 0) -> ProjectionReport:
    """Coordinate-0 projection on a perfect A/pA: every r_0 lifts, and the lift is unique.

    Uniqueness is checked by rebuilding each element from its own coordinate 0
    and from p-th powers of its top coordinate.
    """
    if not T.residue.perfect:
        raise ImperfectRing(f"{T.residue.describe()} is not perfect")
    rng = random.Random(seed)
    surj = inj = 0
    for _ in range(samples):
        if isinstance(T.residue, ResidueOfIntegers):
            r0 = rng.randrange(T.p)
        else:
            from .homology.perfection import random_element

            r0 = random_element(T.residue.base.vars, T.p, rng)
        e = T.from_root(r0)
        surj += T.residue.equal(T.project(e), r0)
        top = e.coords[-1]
        rebuilt = [top]
        for _ in range(T.L - 1):
            rebuilt.append(T.residue.frob(rebuilt[-1]))
        inj += T.element(list(reversed(rebuilt))) == e
    return ProjectionReport(T.describe(), samples, surj, inj)


def witness_check(T: TiltRing, r0) -> dict:
    """Validate the lifted sequence of r_0 and report which coordinates vanish in A/pA."""
    e = T.from_root(r0)
    zeros = [i for i, c in enumerate(e.coords) if T.residue.is_zero(c)]
    return {
        "tilt": T.describe(),
        "coords": [T.residue.fmt(c) for c in e.coords],
        "valid": True,
        "zero_coordinates": zeros,
        "r0_nonzero": 0 not in zeros,
    }
