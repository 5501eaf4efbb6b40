"""Rings, ideals and the ideal-theoretic operations on level truncations.

A :class:`RingPresentation` is F_p[vars]/(relations).  Its perfection is the
union of the level rings R_n, where R_n is generated by the roots
x_i^(1/p^n).  Calling u_i = x_i^(1/p^n), R_n is presented by the same
relations written in the u_i: the perfection is reduced, so the relation
f(u)^(p^n) = f(u^(p^n)) forces f(u) = 0.  This assumes the base
presentation is reduced; level 0 is always the presentation verbatim.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

from ..errors import LevelTooLow, PresentationError
from ..perfect_poly import (
    PerfPoly,
    PrimeChar,
    frobenius,
    level_of,
    parse_poly,
    parse_poly_list,
    pth_root,
    rescale,
    unrescale,
)
from .core import (
    DEFAULT_PAIR_BUDGET,
    GroebnerBasis,
    MonomialOrder,
    count_standard_monomials,
    krull_dimension_of_lms,
)
from .modules import element_to_vector, kernel

INFINITE = math.inf


@dataclass(frozen=True)
class RingPresentation:
    char: PrimeChar
    vars: tuple
    relations: tuple = ()

    def __post_init__(self):
        if isinstance(self.char, int):
            object.__setattr__(self, "char", PrimeChar(self.char))
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise PresentationError("duplicate variable names")
        rels = []
        for r in self.relations:
            if isinstance(r, str):
                r = parse_poly(r, self.char, self.vars)
            if r.variables != self.vars or r.char != self.char:
                raise PresentationError("relation lives in a different ring")
            if level_of(r) != 0:
                raise PresentationError(f"relation {r} has fractional exponents")
            rels.append(r)
        object.__setattr__(self, "relations", tuple(rels))

    @property
    def p(self) -> int:
        return self.char.p

    @classmethod
    def from_dict(cls, data: dict) -> "RingPresentation":
        try:
            return cls(PrimeChar(int(data["char"])), tuple(data["vars"]), tuple(data.get("relations", ())))
        except KeyError as exc:
            raise PresentationError(f"ring presentation missing field {exc}") from None

    @classmethod
    def load(cls, path) -> "RingPresentation":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise PresentationError(f"cannot read ring file {path}: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {"char": self.p, "vars": list(self.vars), "relations": [str(r) for r in self.relations]}

    def poly(self, text: str) -> PerfPoly:
        return parse_poly(text, self.char, self.vars)

    def polys(self, text: str) -> list:
        return parse_poly_list(text, self.char, self.vars)

    def at_level(self, n: int) -> "LevelRing":
        return LevelRing(self, n)

    def zero(self) -> PerfPoly:
        return PerfPoly.zero(self.char, self.vars)

    def one(self) -> PerfPoly:
        return PerfPoly.one(self.char, self.vars)


@dataclass(frozen=True)
class LevelRing:
    base: RingPresentation
    level: int = 0
    budget: int = field(default=DEFAULT_PAIR_BUDGET, compare=False)

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def vars(self) -> tuple:
        return self.base.vars

    @property
    def nvars(self) -> int:
        return len(self.base.vars)

    @cached_property
    def rescaled_relations(self) -> list:
        return [rescale(r, 0) for r in self.base.relations]

    def relation_elements(self) -> list:
        """Relations of R_n as elements of the perfection: r(x^(1/p^n))."""
        return [pth_root(r, self.level) for r in self.base.relations]

    def encode(self, f: PerfPoly) -> dict:
        if f.variables != self.vars:
            f = f.with_variables(self.vars)
        if level_of(f) > self.level:
            raise LevelTooLow(f"{f} has level {level_of(f)}, ring level is {self.level}")
        return rescale(f, self.level)

    def decode(self, d: dict) -> PerfPoly:
        return unrescale(d, self.level, self.base.char, self.vars)

    def lift(self, k: int = 1) -> "LevelRing":
        return LevelRing(self.base, self.level + k, self.budget)

    def ideal(self, gens) -> "IdealHandle":
        return IdealHandle(self, gens)

    @cached_property
    def relations_gb(self) -> GroebnerBasis:
        els = [{(0, e): c for e, c in r.items()} for r in self.rescaled_relations]
        return GroebnerBasis.compute(els, MonomialOrder(self.nvars), self.p, self.budget)

    def normal_form(self, f: PerfPoly) -> PerfPoly:
        d = {(0, e): c for e, c in self.encode(f).items()}
        r = self.relations_gb.reduce(d)
        return self.decode({e: c for (_, e), c in r.items()})

    def is_zero(self, f: PerfPoly) -> bool:
        return not self.normal_form(f)

    def equal(self, f: PerfPoly, g: PerfPoly) -> bool:
        return self.is_zero(f - g)


def _as_element(d: dict) -> dict:
    return {(0, e): c for e, c in d.items()}


def _from_element(el: dict) -> dict:
    return {e: c for (_, e), c in el.items()}


class IdealHandle:
    """Finitely generated ideal of a level ring."""

    def __init__(self, ring: LevelRing, generators: Sequence):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.base.poly(g)
            if level_of(g) > ring.level:
                raise LevelTooLow(f"generator {g} above ring level {ring.level}")
            gens.append(g)
        self.generators = tuple(gens)

    def __repr__(self):
        return f"IdealHandle(({', '.join(map(str, self.generators))}), level={self.ring.level})"

    def encoded(self) -> list:
        return [self.ring.encode(g) for g in self.generators]

    def with_relations(self) -> list:
        return [g for g in self.encoded() if g] + [r for r in self.ring.rescaled_relations if r]

    @cached_property
    def gb(self) -> GroebnerBasis:
        els = [_as_element(g) for g in self.with_relations()]
        return GroebnerBasis.compute(els, MonomialOrder(self.ring.nvars), self.ring.p, self.ring.budget)

    def at_level(self, n: int) -> "IdealHandle":
        return IdealHandle(LevelRing(self.ring.base, n, self.ring.budget), self.generators)

    def contains(self, f: PerfPoly) -> bool:
        return self.gb.contains(_as_element(self.ring.encode(f)))

    def reduce(self, f: PerfPoly) -> PerfPoly:
        return self.ring.decode(_from_element(self.gb.reduce(_as_element(self.ring.encode(f)))))

    def is_unit(self) -> bool:
        return self.gb.is_unit()

    def __contains__(self, f):
        return self.contains(f)


@dataclass(frozen=True)
class GBResult:
    order: str
    basis: tuple
    ring: LevelRing


def groebner(I: IdealHandle, order: str = "grevlex") -> GBResult:
    """Reduced Groebner basis of I + relations in the rescaled polynomial ring."""
    if order != "grevlex":
        raise ValueError("only the grevlex order is exposed for ideals")
    return GBResult(order, tuple(I.ring.decode(_from_element(e)) for e in I.gb.elements), I.ring)


# -- membership with certificates ------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    member: bool
    certificate: tuple | None = None
    relation_cofactors: tuple | None = None

    def __bool__(self):
        return self.member


def _certified_membership(f: PerfPoly, gens: Sequence[PerfPoly], ring: LevelRing) -> Membership:
    p = ring.p
    nv = ring.nvars
    enc_gens = [ring.encode(g) for g in gens]
    rels = [r for r in ring.rescaled_relations if r]
    k, m = len(enc_gens), len(rels)
    zero = tuple([0] * nv)
    els = []
    for i, g in enumerate(enc_gens):
        el = {(0, e): c for e, c in g.items()}
        el[(1 + i, zero)] = 1
        els.append(el)
    for j, r in enumerate(rels):
        el = {(0, e): c for e, c in r.items()}
        el[(1 + k + j, zero)] = 1
        els.append(el)
    target = {(0, e): c for e, c in ring.encode(f).items()}
    if not target:
        zero_poly = ring.base.zero()
        return Membership(True, tuple(zero_poly for _ in gens), tuple(zero_poly for _ in rels))
    gb = GroebnerBasis.compute(els, MonomialOrder(nv, module="pot"), p, ring.budget)
    rem = gb.reduce(target)
    if any(comp == 0 for comp, _ in rem):
        return Membership(False)
    vec = element_to_vector(rem, k + m + 1)
    cof = [ring.decode({e: (-c) % p for e, c in v.items()}) for v in vec[1:]]
    cert, rel_cof = tuple(cof[:k]), tuple(cof[k:])
    _verify_certificate(f, gens, cert, ring, rel_cof)
    return Membership(True, cert, rel_cof)


def _verify_certificate(f, gens, cert, ring: LevelRing, rel_cof=()):
    total = f
    for c, g in zip(cert, gens):
        total = total - c * g
    for c, r in zip(rel_cof, ring.relation_elements()):
        total = total - c * r
    if total:
        raise AssertionError(f"membership certificate failed to verify: residual {total}")


def membership(f: PerfPoly, I: IdealHandle, certificate: bool = True) -> Membership:
    """Decide f in I; when true, return cofactors c with f = sum c_i g_i (+ relations)."""
    if level_of(f) > I.ring.level:
        raise LevelTooLow(f"{f} has level {level_of(f)} > {I.ring.level}")
    if not certificate:
        return Membership(I.contains(f))
    if not I.contains(f):
        return Membership(False)
    return _certified_membership(f, I.generators, I.ring)


# -- ideal arithmetic --------------------------------------------------------------------

def _common(I: IdealHandle, J: IdealHandle) -> LevelRing:
    if I.ring.base != J.ring.base:
        raise ValueError("ideals live in different rings")
    if I.ring.level == J.ring.level:
        return I.ring
    return LevelRing(I.ring.base, max(I.ring.level, J.ring.level), I.ring.budget)


def _eliminate(polys, nv_elim, ring: LevelRing) -> list:
    """GB of polys in (t_1..t_k, u) under an elimination order; keep t-free elements."""
    nv = ring.nvars
    order = MonomialOrder(nv_elim + nv, blocks=(nv_elim, nv))
    gb = GroebnerBasis.compute([_as_element(f) for f in polys if f], order, ring.p, ring.budget)
    out = []
    for el in gb.elements:
        if all(not any(e[:nv_elim]) for (_, e) in el):
            out.append({e[nv_elim:]: c for (_, e), c in el.items()})
    return out


def _pad(d: dict, k: int, tags=()) -> dict:
    """Prepend k tag exponents (default zero) to each monomial."""
    tags = tuple(tags) or tuple([0] * k)
    return {tags + e: c for e, c in d.items()}


def _mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            c = (out.get(e, 0) + c1 * c2) % p
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def _nonzero_mod_relations(ring: LevelRing, polys) -> list:
    out = []
    for f in polys:
        r = ring.relations_gb.reduce(_as_element(f))
        if r:
            out.append(f)
    return out


def intersection(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I cap J via t*I + (1-t)*J with t eliminated."""
    ring = _common(I, J)
    p = ring.p
    nv = ring.nvars
    one_t = {(1,) + tuple([0] * nv): 1}
    one = {tuple([0] * (nv + 1)): 1}
    one_minus_t = {(1,) + tuple([0] * nv): p - 1, tuple([0] * (nv + 1)): 1}
    polys = [_mul(one_t, _pad(ring.encode(g), 1), p) for g in I.generators]
    polys += [_mul(one_minus_t, _pad(ring.encode(g), 1), p) for g in J.generators]
    polys += [_mul(one, _pad(r, 1), p) for r in ring.rescaled_relations]
    gens = _nonzero_mod_relations(ring, _eliminate(polys, 1, ring))
    return IdealHandle(ring, [ring.decode(g) for g in gens])


def product(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    ring = _common(I, J)
    return IdealHandle(ring, [a * b for a in I.generators for b in J.generators])


def sum_ideals(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    ring = _common(I, J)
    return IdealHandle(ring, I.generators + J.generators)


def divide_exact(h: dict, f: dict, nvars: int, p: int) -> dict | None:
    """Quotient h / f in F_p[u], or None if f does not divide h."""
    order = MonomialOrder(nvars)
    from .core import _Reducer, leading

    lm, lc = leading(_as_element(f), order)
    inv = pow(lc, -1, p)
    monic = {m: c * inv % p for m, c in _as_element(f).items()}
    track: list = []
    rem = _Reducer([monic], [lm], order, p).reduce(_as_element(h), track=track)
    if rem:
        return None
    q: dict = {}
    for _, exp, c in track:
        v = (q.get(exp, 0) + c * inv) % p
        if v:
            q[exp] = v
        else:
            q.pop(exp, None)
    return q


def colon(I: IdealHandle, f: PerfPoly) -> IdealHandle:
    """(I + relations) : f, computed as ((I + relations) cap (f)) / f."""
    ring = I.ring
    if level_of(f) > ring.level:
        ring = LevelRing(ring.base, level_of(f), ring.budget)
        I = I.at_level(ring.level)
    if ring.is_zero(f):
        return IdealHandle(ring, [ring.base.one()])
    p, nv = ring.p, ring.nvars
    fe = ring.encode(f)
    one_t = {(1,) + tuple([0] * nv): 1}
    one_minus_t = {(1,) + tuple([0] * nv): p - 1, tuple([0] * (nv + 1)): 1}
    polys = [_mul(one_t, _pad(g, 1), p) for g in I.with_relations()]
    polys.append(_mul(one_minus_t, _pad(fe, 1), p))
    gens = []
    for h in _eliminate(polys, 1, ring):
        q = divide_exact(h, fe, nv, p)
        if q is None:
            raise AssertionError("intersection with (f) produced a non-multiple of f")
        gens.append(q)
    gens = _nonzero_mod_relations(ring, gens)
    return IdealHandle(ring, [ring.decode(g) for g in gens])


def ideal_contains_ideal(I: IdealHandle, J: IdealHandle) -> bool:
    """J subset of I."""
    return all(I.contains(g) for g in J.generators)


def syzygies(gens, ring: LevelRing) -> list:
    """Generators of the syzygy module of a generator list (or matrix rows) over ``ring``.

    ``gens`` is either a sequence of PerfPoly (a 1 x k matrix) or a list of rows.
    Returns a list of column vectors of PerfPoly.
    """
    if gens and isinstance(gens[0], PerfPoly):
        rows = [list(gens)]
    else:
        rows = [list(r) for r in gens]
    if not rows or not rows[0]:
        return []
    ncols = len(rows[0])
    mat = [[ring.encode(e) for e in row] for row in rows]
    ker = kernel(mat, ncols, ring.nvars, ring.p, ring.rescaled_relations, ring.budget)
    out = [[ring.decode(v) for v in vec] for vec in ker]
    for vec in out:
        for row in rows:
            total = sum((a * b for a, b in zip(row, vec)), ring.base.zero())
            if not ring.is_zero(total):
                raise AssertionError("computed syzygy does not multiply out to zero")
    return out


# -- numerical invariants ------------------------------------------------------------------

def colength(I: IdealHandle):
    """dim_F_p of ring/I, or INFINITE."""
    n = count_standard_monomials(I.gb, I.ring.nvars)
    return INFINITE if n is None else n


def krull_dimension(I: IdealHandle) -> int:
    """Krull dimension of ring/I (-1 when I is the unit ideal)."""
    return krull_dimension_of_lms([lm[1] for lm in I.gb.lms], I.ring.nvars)


def subalgebra_membership(f: PerfPoly, gens: Sequence[PerfPoly], ambient: LevelRing) -> bool:
    """Is f in the F_p-subalgebra generated by gens (modulo the ambient relations)?"""
    m = len(gens)
    nv = ambient.nvars
    p = ambient.p
    polys = []
    for i, g in enumerate(gens):
        tag = [0] * m
        tag[i] = 1
        # u-variables first (eliminated), then tags T_i
        el = {e + tuple([0] * m): c for e, c in ambient.encode(g).items()}
        t = tuple([0] * nv) + tuple(tag)
        el[t] = (el.get(t, 0) - 1) % p
        polys.append({k: v for k, v in el.items() if v})
    for r in ambient.rescaled_relations:
        polys.append({e + tuple([0] * m): c for e, c in r.items()})
    order = MonomialOrder(nv + m, blocks=(nv, m) if m else None)
    gb = GroebnerBasis.compute([_as_element(q) for q in polys if q], order, p, ambient.budget)
    target = {(0, e + tuple([0] * m)): c for e, c in ambient.encode(f).items()}
    rem = gb.reduce(target)
    return all(not any(e[:nv]) for (_, e) in rem)


# -- colimit ideals -----------------------------------------------------------------------------

@dataclass(frozen=True)
class ColimitIdeal:
    """The ideal generated by all p-power roots of the given roots."""

    ring: RingPresentation
    roots: tuple

    def __post_init__(self):
        roots = tuple(self.ring.poly(r) if isinstance(r, str) else r for r in self.roots)
        object.__setattr__(self, "roots", roots)

    def generators_at(self, m: int) -> list:
        return [pth_root(a, m) for a in self.roots]

    def at_level(self, m: int) -> IdealHandle:
        gens = self.generators_at(m)
        lev = max([level_of(g) for g in gens] + [m])
        return IdealHandle(LevelRing(self.ring, lev), gens)

    def __str__(self):
        return " + ".join(f"({r})^inf" for r in self.roots) or "(0)"


@dataclass(frozen=True)
class SearchResult:
    found: bool
    level: int | None = None
    generators: tuple = ()
    certificate: tuple | None = None
    tried: tuple = ()

    @property
    def inconclusive(self) -> bool:
        return not self.found


def colimit_membership(f: PerfPoly, C: ColimitIdeal, J: ColimitIdeal | None = None, max_level: int | None = None,
                       budget: int = DEFAULT_PAIR_BUDGET, min_level: int = 0) -> SearchResult:
    """Search levels m = max(level_of(f), min_level), ... for f in (roots^(1/p^m)) (or the product with J).

    Inconclusive results say nothing about non-membership.
    """
    start = max(level_of(f), min_level)
    if max_level is None:
        max_level = start + 6
    tried = []
    for m in range(start, max_level + 1):
        gens = C.generators_at(m)
        if J is not None:
            gens = [a * b for a in gens for b in J.generators_at(m)]
        lev = max([level_of(g) for g in gens] + [level_of(f), m])
        ring = LevelRing(C.ring, lev, budget)
        tried.append(m)
        if not gens:
            if not ring.is_zero(f):
                continue
            return SearchResult(True, m, (), (), tuple(tried))
        I = IdealHandle(ring, gens)
        if I.contains(f):
            mem = _certified_membership(f, gens, ring)
            return SearchResult(True, m, tuple(gens), mem.certificate, tuple(tried))
    return SearchResult(False, None, (), None, tuple(tried))


def radical_membership(f: PerfPoly, I: IdealHandle, max_power: int | None = None):
    """Radical membership.

    Without ``max_power`` this is the exact extra-variable test
    (1 in I + (1 - t f)) and returns a bool.  With ``max_power`` it searches
    f^(p^m) in I for m <= max_power and returns a SearchResult.
    """
    ring = I.ring
    if level_of(f) > ring.level:
        ring = LevelRing(ring.base, level_of(f), ring.budget)
        I = I.at_level(ring.level)
    if max_power is not None:
        tried = []
        for m in range(max_power + 1):
            tried.append(m)
            if I.contains(frobenius(f, m)):
                return SearchResult(True, m, I.generators, None, tuple(tried))
        return SearchResult(False, None, (), None, tuple(tried))
    p, nv = ring.p, ring.nvars
    polys = [_pad(g, 1) for g in I.with_relations()]
    tf = _mul({(1,) + tuple([0] * nv): 1}, _pad(ring.encode(f), 1), p)
    rab = {tuple([0] * (nv + 1)): 1}
    for e, c in tf.items():
        rab[e] = (rab.get(e, 0) - c) % p
    polys.append({e: c for e, c in rab.items() if c})
    gb = GroebnerBasis.compute([_as_element(q) for q in polys if q], MonomialOrder(nv + 1), p, ring.budget)
    return gb.is_unit()


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    failing_index: int | None = None  # 1-based
    reason: str = ""

    def __bool__(self):
        return self.regular


def is_regular_sequence(seq: Sequence[PerfPoly], ring: LevelRing, module: IdealHandle | None = None) -> RegularityResult:
    """Check that seq is a regular sequence on ring/module_ideal (default: the ring itself)."""
    lev = max([ring.level] + [level_of(x) for x in seq])
    if lev != ring.level:
        ring = LevelRing(ring.base, lev, ring.budget)
    base_gens = list(module.generators) if module is not None else []
    for i, x in enumerate(seq):
        prev = IdealHandle(ring, base_gens + list(seq[:i]))
        col = colon(prev, x)
        if not ideal_contains_ideal(prev, col):
            return RegularityResult(False, i + 1, f"element {i + 1} is a zero-divisor modulo its predecessors")
    if IdealHandle(ring, base_gens + list(seq)).is_unit():
        return RegularityResult(False, len(seq), "quotient by the sequence is zero")
    return RegularityResult(True)
