"""Sparse polynomials over F_p with exponents in Z[1/p], the elements of perfect closures.

A :class:`PerfPoly` is a finite sum of terms ``c * x_1^(a_1) * ... * x_k^(a_k)``
where ``c`` lies in the prime field and every ``a_i`` is a nonnegative rational
whose denominator is a power of ``p``.  Values are immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    CharacteristicMismatch,
    LevelTooLow,
    NonPPowerDenominator,
    ParseError,
    UnknownVariable,
)

Monomial = tuple  # tuple[Fraction, ...], dense in the declared variables

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def p_power_level(den: int, p: int) -> int | None:
    """Return k with den == p**k, or None."""
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    return k if den == 1 else None


@dataclass(frozen=True)
class PrimeChar:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"characteristic must be prime, got {self.p!r}")

    def __int__(self):
        return self.p


@dataclass(frozen=True)
class FpElem:
    value: int
    char: PrimeChar

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.char.p)

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.char != self.char:
                raise CharacteristicMismatch("F_p elements of different characteristic")
            return other.value
        return int(other)

    def __add__(self, other):
        return FpElem(self.value + self._coerce(other), self.char)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElem(self.value - self._coerce(other), self.char)

    def __mul__(self, other):
        return FpElem(self.value * self._coerce(other), self.char)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.char)

    def __pow__(self, e: int):
        return FpElem(pow(self.value, e, self.char.p), self.char)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpElem(pow(self.value, -1, self.char.p), self.char)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class PExponent:
    """The rational ``numerator / p**level``, normalized so p does not divide the numerator."""

    numerator: int
    level: int
    p: int

    def __post_init__(self):
        if self.numerator < 0 or self.level < 0:
            raise ValueError("exponents are nonnegative")
        num, lev = self.numerator, self.level
        while lev > 0 and num % self.p == 0:
            num //= self.p
            lev -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "level", lev)

    @classmethod
    def from_fraction(cls, value, p: int) -> "PExponent":
        value = Fraction(value)
        lev = p_power_level(value.denominator, p)
        if lev is None:
            raise NonPPowerDenominator(f"denominator {value.denominator} is not a power of {p}")
        return cls(value.numerator, lev, p)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.p**self.level)

    def __lt__(self, other):
        # cross-multiplied integer comparison
        return self.numerator * other.p**other.level < other.numerator * self.p**self.level

    def __le__(self, other):
        return self == other or self < other

    def __str__(self):
        if self.level == 0:
            return str(self.numerator)
        return f"{self.numerator}/{self.p**self.level}"


def monomial_key(mono: Sequence) -> tuple:
    """Degree-reverse-lexicographic sort key; larger key means larger monomial."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


def _exp_level(e: Fraction, p: int) -> int:
    return p_power_level(e.denominator, p)


class PerfPoly:
    """Element of the perfection of F_p[vars]."""

    __slots__ = ("char", "variables", "_terms", "_sorted", "_hash")

    def __init__(self, char: PrimeChar | int, variables: Sequence[str], terms: Mapping = ()):
        if isinstance(char, int):
            char = PrimeChar(char)
        self.char = char
        self.variables = tuple(variables)
        p = char.p
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        nvars = len(self.variables)
        for mono, c in items:
            c %= p
            if not c:
                continue
            mono = tuple(Fraction(e) for e in mono)
            if len(mono) != nvars:
                raise ValueError("monomial length does not match variable count")
            for e in mono:
                if e < 0:
                    raise ValueError("negative exponent")
                if _exp_level(e, p) is None:
                    raise NonPPowerDenominator(f"exponent {e} has a non p-power denominator")
            c = (clean.get(mono, 0) + c) % p
            if c:
                clean[mono] = c
            else:
                clean.pop(mono, None)
        self._terms = clean
        self._sorted = None
        self._hash = None

    @classmethod
    def _raw(cls, char, variables, terms: dict) -> "PerfPoly":
        # terms already canonical
        obj = cls.__new__(cls)
        obj.char = char
        obj.variables = variables
        obj._terms = terms
        obj._sorted = None
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, char, variables):
        return cls(char, variables)

    @classmethod
    def constant(cls, c: int, char, variables):
        variables = tuple(variables)
        return cls(char, variables, {tuple(Fraction(0) for _ in variables): c})

    @classmethod
    def one(cls, char, variables):
        return cls.constant(1, char, variables)

    @classmethod
    def var(cls, name: str, char, variables, exponent=1):
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(f"unknown variable {name!r}")
        mono = tuple(Fraction(exponent) if v == name else Fraction(0) for v in variables)
        return cls(char, variables, {mono: 1})

    # basic access -------------------------------------------------------
    @property
    def p(self) -> int:
        return self.char.p

    @property
    def terms(self) -> list:
        """(monomial, coefficient) pairs in descending degrevlex order."""
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)
        return self._sorted

    def as_dict(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def leading_term(self):
        return self.terms[0] if self._terms else None

    def constant_term(self) -> int:
        return self._terms.get(tuple(Fraction(0) for _ in self.variables), 0)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def support_vars(self) -> set:
        return {self.variables[i] for m in self._terms for i, e in enumerate(m) if e}

    @property
    def level(self) -> int:
        return level_of(self)

    def monomials(self):
        return list(self._terms)

    def coefficient(self, mono) -> int:
        return self._terms.get(tuple(Fraction(e) for e in mono), 0)

    def exponent_of(self, mono, var: str) -> PExponent:
        return PExponent.from_fraction(mono[self.variables.index(var)], self.p)

    # arithmetic ----------------------------------------------------------
    def _check(self, other: "PerfPoly"):
        if other.char != self.char:
            raise CharacteristicMismatch(f"characteristic {self.p} vs {other.p}")
        if other.variables != self.variables:
            raise ValueError(f"variable sets differ: {self.variables} vs {other.variables}")

    def _lift(self, other) -> "PerfPoly":
        if isinstance(other, PerfPoly):
            self._check(other)
            return other
        if isinstance(other, FpElem):
            other = other.value
        if isinstance(other, int):
            return PerfPoly.constant(other, self.char, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = dict(self._terms)
        for m, c in other._terms.items():
            c = (out.get(m, 0) + c) % p
            if c:
                out[m] = c
            else:
                out.pop(m, None)
        return PerfPoly._raw(self.char, self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return PerfPoly._raw(self.char, self.variables, {m: (-c) % p for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.p
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = (out.get(m, 0) + c1 * c2) % p
                if c:
                    out[m] = c
                else:
                    out.pop(m, None)
        return PerfPoly._raw(self.char, self.variables, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "PerfPoly":
        p = self.p
        c %= p
        if not c:
            return PerfPoly.zero(self.char, self.variables)
        return PerfPoly._raw(self.char, self.variables, {m: v * c % p for m, v in self._terms.items()})

    def mul_monomial(self, mono, c: int = 1) -> "PerfPoly":
        p = self.p
        c %= p
        if not c:
            return PerfPoly.zero(self.char, self.variables)
        mono = tuple(Fraction(e) for e in mono)
        return PerfPoly._raw(
            self.char,
            self.variables,
            {tuple(a + b for a, b in zip(m, mono)): v * c % p for m, v in self._terms.items()},
        )

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers")
        p = self.p
        result = PerfPoly.one(self.char, self.variables)
        k = 0
        # f^e = prod_k Frob^k(f^{digit_k}) using the base-p digits of e
        while e:
            e, digit = divmod(e, p)
            if digit:
                piece = self
                for _ in range(digit - 1):
                    piece = piece * self
                result = result * frobenius(piece, k)
            k += 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = PerfPoly.constant(other, self.char, self.variables)
        if not isinstance(other, PerfPoly):
            return NotImplemented
        return (
            self.char == other.char
            and self.variables == other.variables
            and self._terms == other._terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.char.p, self.variables, frozenset(self._terms.items())))
        return self._hash

    # views ------------------------------------------------------------------
    def with_variables(self, variables: Sequence[str]) -> "PerfPoly":
        """Re-embed into a ring with a superset (or reordering) of variables."""
        variables = tuple(variables)
        idx = []
        for v in self.variables:
            if v not in variables:
                if any(m[self.variables.index(v)] for m in self._terms):
                    raise UnknownVariable(f"variable {v!r} missing from target ring")
                idx.append(None)
            else:
                idx.append(variables.index(v))
        out = {}
        for m, c in self._terms.items():
            new = [Fraction(0)] * len(variables)
            for i, e in enumerate(m):
                if idx[i] is not None:
                    new[idx[i]] = e
            out[tuple(new)] = c
        return PerfPoly._raw(self.char, variables, out)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"PerfPoly({format_poly(self)!r}, p={self.p}, vars={list(self.variables)})"


# -- printing ----------------------------------------------------------------

def _format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def format_monomial(mono, variables) -> str:
    parts = []
    for v, e in zip(variables, mono):
        if e == 0:
            continue
        parts.append(v if e == 1 else f"{v}^{_format_exponent(e)}")
    return "*".join(parts)


def format_poly(f: PerfPoly) -> str:
    if f.is_zero():
        return "0"
    out = []
    for mono, c in f.terms:
        body = format_monomial(mono, f.variables)
        if not body:
            out.append(str(c))
        elif c == 1:
            out.append(body)
        else:
            out.append(f"{c}*{body}")
    return " + ".join(out)


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-zA-Z][a-zA-Z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("var", m.group(2), m.start(2)))
        elif m.group(3):
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, char: PrimeChar, variables):
        self.text = text
        self.char = char
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if kind != "op" or val != value:
            raise ParseError(f"expected {value!r}", pos, self.text)

    def parse(self) -> PerfPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        total = PerfPoly.zero(self.char, self.variables)
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        while True:
            total = total + self.term().scale(sign)
            kind, val, pos = self.peek()
            if kind == "end":
                return total
            if kind == "op" and val in "+-":
                self.take()
                sign = -1 if val == "-" else 1
                continue
            raise ParseError(f"unexpected token {val!r}", pos, self.text)

    def term(self) -> PerfPoly:
        coeff = 1
        mono = [Fraction(0)] * len(self.variables)
        kind, val, pos = self.peek()
        seen = False
        if kind == "int":
            self.take()
            coeff = val
            seen = True
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                kind, val, pos = self.peek()
                if kind == "int":
                    # allow "2*3*x" style constant products
                    self.take()
                    coeff *= val
                    seen = True
                    continue
                if kind != "var":
                    raise ParseError("expected variable after '*'", pos, self.text)
            if kind != "var":
                break
            self.take()
            if val not in self.variables:
                raise UnknownVariable(f"unknown variable {val!r}", pos, self.text)
            e = self.exponent()
            mono[self.variables.index(val)] += e
            seen = True
        if not seen:
            raise ParseError("expected a term", pos, self.text)
        return PerfPoly(self.char, self.variables, {tuple(mono): coeff})

    def exponent(self) -> Fraction:
        kind, val, pos = self.peek()
        if not (kind == "op" and val == "^"):
            return Fraction(1)
        self.take()
        kind, val, pos = self.take()
        if kind == "int":
            return Fraction(val)
        if kind == "op" and val == "(":
            kind, num, npos = self.take()
            if kind != "int":
                raise ParseError("expected integer numerator", npos, self.text)
            kind, val, dpos = self.peek()
            den = 1
            if kind == "op" and val == "/":
                self.take()
                kind, den, dpos = self.take()
                if kind != "int":
                    raise ParseError("expected integer denominator", dpos, self.text)
                if den == 0:
                    raise ParseError("zero denominator", dpos, self.text)
            self.expect(")")
            if p_power_level(den, self.char.p) is None:
                raise NonPPowerDenominator(
                    f"denominator {den} is not a power of {self.char.p}", dpos, self.text
                )
            return Fraction(num, den)
        raise ParseError("malformed exponent", pos, self.text)


def parse_poly(text: str, char: PrimeChar | int, variables: Sequence[str]) -> PerfPoly:
    """Parse ``text`` in the polynomial grammar into a canonical PerfPoly."""
    if isinstance(char, int):
        char = PrimeChar(char)
    return _Parser(text, char, variables).parse()


def parse_poly_list(text: str, char, variables) -> list[PerfPoly]:
    """Comma-separated expressions; an empty string gives an empty list."""
    parts = [s for s in text.split(",")]
    if not text.strip():
        return []
    return [parse_poly(s, char, variables) for s in parts]


# -- Frobenius and roots --------------------------------------------------------

def frobenius(f: PerfPoly, k: int = 1) -> PerfPoly:
    """Return f^(p^k): exponents scale by p^k, coefficients are fixed by Fermat."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return f
    s = f.p**k
    return PerfPoly._raw(f.char, f.variables, {tuple(e * s for e in m): c for m, c in f._terms.items()})


def pth_root(f: PerfPoly, k: int = 1) -> PerfPoly:
    """The unique g with g^(p^k) = f."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return f
    s = f.p**k
    return PerfPoly._raw(f.char, f.variables, {tuple(e / s for e in m): c for m, c in f._terms.items()})


def level_of(f: PerfPoly) -> int:
    lev = 0
    p = f.p
    for m in f._terms:
        for e in m:
            if e.denominator != 1:
                lev = max(lev, p_power_level(e.denominator, p))
    return lev


def rescale(f: PerfPoly, n: int) -> dict:
    """Integer-exponent image of f under x_i^(1/p^n) -> u_i.

    Returns a dict mapping integer exponent tuples to coefficients.
    """
    q = f.p**n
    out = {}
    for m, c in f._terms.items():
        scaled = tuple(e * q for e in m)
        if any(e.denominator != 1 for e in scaled):
            raise LevelTooLow(f"{f} has level {level_of(f)} > {n}")
        out[tuple(int(e) for e in scaled)] = c
    return out


def unrescale(terms: Mapping, n: int, char, variables) -> PerfPoly:
    """Inverse of :func:`rescale`."""
    if isinstance(char, int):
        char = PrimeChar(char)
    q = char.p**n
    p = char.p
    out = {}
    for m, c in terms.items():
        c %= p
        if c:
            out[tuple(Fraction(e, q) for e in m)] = c
    return PerfPoly._raw(char, tuple(variables), out)


def evaluate(f: PerfPoly, images: Mapping[str, PerfPoly]) -> PerfPoly:
    """Substitute level-0 polynomial f (integer exponents) at the given images."""
    if level_of(f) != 0:
        raise LevelTooLow("evaluate needs integer exponents")
    target = next(iter(images.values()))
    result = PerfPoly.zero(target.char, target.variables)
    cache: dict = {}
    for mono, c in f.terms:
        term = PerfPoly.constant(c, target.char, target.variables)
        for v, e in zip(f.variables, mono):
            if e:
                key = (v, int(e))
                if key not in cache:
                    cache[key] = images[v] ** int(e)
                term = term * cache[key]
        result = result + term
    return result


def map_perfection(hom: Mapping[str, PerfPoly], f: PerfPoly, level: int | None = None) -> PerfPoly:
    """Apply the perfection of the homomorphism given on generators.

    Computes hom(f^(p^n))^(1/p^n) with n = level_of(f) unless a larger level is given;
    the result does not depend on the choice.
    """
    n = level_of(f) if level is None else level
    if n < level_of(f):
        raise LevelTooLow(f"level {n} below level_of(f) = {level_of(f)}")
    images = {v: hom.get(v) for v in f.variables}
    missing = [v for v, img in images.items() if img is None and v in f.support_vars()]
    if missing:
        raise UnknownVariable(f"no image for {missing}")
    images = {v: img for v, img in images.items() if img is not None}
    if not images:
        raise ValueError("homomorphism has no images")
    return pth_root(evaluate(frobenius(f, n), images), n)


def common_ring(polys: Iterable[PerfPoly]):
    polys = list(polys)
    if not polys:
        raise ValueError("no polynomials")
    first = polys[0]
    for g in polys[1:]:
        first._check(g)
    return first.char, first.variables
