"""Buchberger's algorithm for submodules of free modules over F_p[u_1..u_k].

Elements are dicts ``{(component, exponents): coefficient}``; an ideal is the
rank-one case with every component equal to 0.  Orders produce flat integer
key tuples, so a larger key is a larger monomial.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from ..errors import ResourceExceeded

DEFAULT_PAIR_BUDGET = 10**6


class MonomialOrder:
    """Block degrevlex order, optionally extended to modules.

    ``blocks`` lists block sizes (default: one block).  Blocks are compared
    left to right, each by degrevlex.  ``module`` is ``"pot"`` (position over
    term, component 0 largest) or ``"top"``.
    """

    def __init__(self, nvars: int, blocks=None, module: str = "pot"):
        self.nvars = nvars
        self.blocks = tuple(blocks) if blocks else (nvars,)
        if sum(self.blocks) != nvars:
            raise ValueError("block sizes must sum to the number of variables")
        if module not in ("pot", "top"):
            raise ValueError("module order must be 'pot' or 'top'")
        self.module = module
        self._cache: dict = {}

    @property
    def tag(self) -> str:
        if len(self.blocks) == 1:
            return f"grevlex/{self.module}"
        return f"elim{list(self.blocks)}/{self.module}"

    def mono_key(self, exp) -> tuple:
        out = []
        start = 0
        for size in self.blocks:
            part = exp[start:start + size]
            out.append(sum(part))
            out.extend(-e for e in reversed(part))
            start += size
        return tuple(out)

    def key(self, mon) -> tuple:
        k = self._cache.get(mon)
        if k is None:
            comp, exp = mon
            mk = self.mono_key(exp)
            k = (-comp,) + mk if self.module == "pot" else mk + (-comp,)
            self._cache[mon] = k
        return k

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and (self.nvars, self.blocks, self.module) == (other.nvars, other.blocks, other.module)
        )

    def __hash__(self):
        return hash((self.nvars, self.blocks, self.module))


def leading(f: dict, order: MonomialOrder):
    m = max(f, key=order.key)
    return m, f[m]


def _divides(a, b) -> bool:
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _lcm(a, b):
    return (a[0], tuple(max(x, y) for x, y in zip(a[1], b[1])))


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a[1], b[1]))


def _deg(mon) -> int:
    return sum(mon[1])


def _quot(a, b):
    return tuple(x - y for x, y in zip(a[1], b[1]))


def shift(f: dict, exp, c: int, p: int) -> dict:
    """c * u^exp * f."""
    return {
        (comp, tuple(a + b for a, b in zip(e, exp))): v * c % p
        for (comp, e), v in f.items()
    }


def add_into(target: dict, f: dict, c: int, p: int):
    for m, v in f.items():
        nv = (target.get(m, 0) + c * v) % p
        if nv:
            target[m] = nv
        else:
            target.pop(m, None)


def make_monic(f: dict, order: MonomialOrder, p: int) -> dict:
    _, c = leading(f, order)
    inv = pow(c, -1, p)
    return {m: v * inv % p for m, v in f.items()}


class _Reducer:
    """Divisor lookup for a fixed list of monic basis elements."""

    def __init__(self, basis, lms, order, p):
        self.basis = basis
        self.lms = lms
        self.order = order
        self.p = p
        by_comp: dict = {}
        for i, lm in enumerate(lms):
            by_comp.setdefault(lm[0], []).append(i)
        self.by_comp = by_comp

    def find(self, mon):
        for i in self.by_comp.get(mon[0], ()):
            if _divides(self.lms[i], mon):
                return i
        return None

    def reduce(self, f: dict, full: bool = True, track=None) -> dict:
        """Return the remainder of f.  ``track`` (list) receives (index, exp, coeff) steps."""
        p = self.p
        key = self.order.key
        f = dict(f)
        heap = [(tuple(-x for x in key(m)), m) for m in f]
        heapq.heapify(heap)
        rem = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = f.get(m)
            if not c:
                continue
            i = self.find(m)
            if i is None:
                rem[m] = c
                del f[m]
                if not full:
                    rem.update(f)
                    return rem
                continue
            q = _quot(m, self.lms[i])
            if track is not None:
                track.append((i, q, c))
            for (comp, e), v in self.basis[i].items():
                mm = (comp, tuple(a + b for a, b in zip(e, q)))
                nv = (f.get(mm, 0) - c * v) % p
                if nv:
                    if mm not in f:
                        heapq.heappush(heap, (tuple(-x for x in key(mm)), mm))
                    f[mm] = nv
                else:
                    f.pop(mm, None)
        return rem


def buchberger(gens, order: MonomialOrder, p: int, budget: int = DEFAULT_PAIR_BUDGET):
    """Reduced Groebner basis of the submodule generated by ``gens``.

    Normal selection by sugar degree, ties broken by lcm and pair index, with
    the Gebauer-Moeller criteria (product criterion only in rank one).
    """
    gens = [{m: v % p for m, v in g.items() if v % p} for g in gens]
    gens = [g for g in gens if g]
    if not gens:
        return []
    ideal = all(m[0] == 0 for g in gens for m in g)
    key = order.key

    G: list = []
    lms: list = []
    sugar: list = []
    active: list = []
    pairs: dict = {}

    def pair_entry(i, j):
        lcm = _lcm(lms[i], lms[j])
        s = max(sugar[i] + _deg(lcm) - _deg(lms[i]), sugar[j] + _deg(lcm) - _deg(lms[j]))
        return (s, key(lcm), i, j)

    def update(h):
        lm_h = lms[h]
        cands = [g for g in range(h) if active[g] and lms[g][0] == lm_h[0]]
        lcms = {g: _lcm(lm_h, lms[g]) for g in cands}
        # chain criterion among the new pairs
        pending = list(cands)
        kept = []
        while pending:
            g = pending.pop(0)
            if (ideal and _coprime(lm_h, lms[g])) or not any(
                _divides(lcms[o], lcms[g]) for o in pending + kept
            ):
                kept.append(g)
        new = [g for g in kept if not (ideal and _coprime(lm_h, lms[g]))]
        # prune old pairs
        for (i, j) in list(pairs):
            lij = _lcm(lms[i], lms[j])
            if (
                _divides(lm_h, lij)
                and _lcm(lms[i], lm_h) != lij
                and _lcm(lms[j], lm_h) != lij
            ):
                del pairs[(i, j)]
        for g in new:
            pairs[(g, h)] = pair_entry(g, h)
        for g in range(h):
            if active[g] and _divides(lm_h, lms[g]):
                active[g] = False
        active.append(True)

    def add(f, s):
        f = make_monic(f, order, p)
        G.append(f)
        lms.append(leading(f, order)[0])
        sugar.append(s)
        update(len(G) - 1)

    def current_reducer():
        idx = [i for i in range(len(G)) if active[i]]
        return _Reducer([G[i] for i in idx], [lms[i] for i in idx], order, p)

    # interreduce the input lightly: reduce each generator by those before it
    for g in sorted(gens, key=lambda g: key(leading(g, order)[0])):
        r = current_reducer().reduce(g) if G else g
        if r:
            add(r, max(_deg(m) for m in r))

    processed = 0
    while pairs:
        (i, j), entry = min(pairs.items(), key=lambda kv: kv[1])
        del pairs[(i, j)]
        processed += 1
        if processed > budget:
            raise ResourceExceeded(f"Groebner basis exceeded {budget} pairs")
        lcm = _lcm(lms[i], lms[j])
        sp = shift(G[i], _quot(lcm, lms[i]), 1, p)
        add_into(sp, shift(G[j], _quot(lcm, lms[j]), 1, p), -1, p)
        if not sp:
            continue
        r = current_reducer().reduce(sp)
        if r:
            add(r, entry[0])

    return interreduce([G[i] for i in range(len(G)) if active[i]], order, p)


def interreduce(basis, order, p):
    """Minimal, fully tail-reduced, monic basis sorted by descending leading monomial."""
    basis = [make_monic(b, order, p) for b in basis if b]
    basis.sort(key=lambda b: order.key(leading(b, order)[0]))
    lms = [leading(b, order)[0] for b in basis]
    keep = []
    for i, lm in enumerate(lms):
        if any(j != i and _divides(lms[j], lm) and (lms[j] != lm or j < i) for j in range(len(lms))):
            continue
        keep.append(i)
    basis = [basis[i] for i in keep]
    lms = [lms[i] for i in keep]
    out = []
    for i, b in enumerate(basis):
        others = [basis[j] for j in range(len(basis)) if j != i]
        olms = [lms[j] for j in range(len(basis)) if j != i]
        red = _Reducer(others, olms, order, p)
        lm = lms[i]
        tail = {m: v for m, v in b.items() if m != lm}
        r = red.reduce(tail) if tail else {}
        r[lm] = b[lm]
        out.append(make_monic(r, order, p))
    out.sort(key=lambda b: order.key(leading(b, order)[0]), reverse=True)
    return out


class GroebnerBasis:
    """A reduced basis together with its order and characteristic."""

    def __init__(self, elements, order: MonomialOrder, p: int):
        self.elements = elements
        self.order = order
        self.p = p
        self.lms = [leading(e, order)[0] for e in elements]
        self._reducer = _Reducer(elements, self.lms, order, p)

    @classmethod
    def compute(cls, gens, order, p, budget=DEFAULT_PAIR_BUDGET):
        return cls(buchberger(gens, order, p, budget), order, p)

    def reduce(self, f: dict, track=None) -> dict:
        return self._reducer.reduce(f, full=True, track=track)

    def contains(self, f: dict) -> bool:
        return not self.reduce(f)

    def is_unit(self) -> bool:
        return any(not any(lm[1]) for lm in self.lms)

    def __len__(self):
        return len(self.elements)


# -- standard monomials and dimension ---------------------------------------------

def _count_standard(lms, nvars):
    """Number of monomials outside the monomial ideal generated by lms (exps only)."""
    if any(not any(m) for m in lms):
        return 0
    if nvars == 0:
        return 1
    bounds = []
    for v in range(nvars):
        pure = [m[v] for m in lms if m[v] > 0 and all(m[w] == 0 for w in range(nvars) if w != v)]
        if not pure:
            return None
        bounds.append(min(pure))
    memo = {}

    def count(gens, v):
        # gens: tuple of exponent tuples over variables v..nvars-1
        if any(not any(g) for g in gens):
            return 0
        if v == nvars:
            return 1
        k = (gens, v)
        if k in memo:
            return memo[k]
        total = 0
        for e in range(bounds[v]):
            sub = set()
            for g in gens:
                if g[0] <= e:
                    sub.add(g[1:])
            sub = _minimize(sub)
            total += count(tuple(sorted(sub)), v + 1)
        memo[k] = total
        return total

    return count(tuple(sorted(_minimize(set(lms)))), 0)


def _minimize(gens):
    gens = set(gens)
    return {g for g in gens if not any(h != g and all(a <= b for a, b in zip(h, g)) for h in gens)}


def count_standard_monomials(gb: GroebnerBasis, nvars: int, rank: int = 1):
    """Dimension over F_p of the quotient F^rank / submodule; None when infinite."""
    total = 0
    for c in range(rank):
        lms = [lm[1] for lm in gb.lms if lm[0] == c]
        n = _count_standard(lms, nvars)
        if n is None:
            return None
        total += n
    return total


def standard_monomials(gb: GroebnerBasis, nvars: int, rank: int = 1, limit: int = 10**6):
    """Enumerate standard monomials (comp, exp) of a finite quotient."""
    out = []
    for c in range(rank):
        lms = [lm[1] for lm in gb.lms if lm[0] == c]
        if any(not any(m) for m in lms):
            continue
        frontier = [tuple([0] * nvars)]
        seen = set(frontier)
        while frontier:
            e = frontier.pop()
            if any(all(a <= b for a, b in zip(m, e)) for m in lms):
                continue
            out.append((c, e))
            if len(out) > limit:
                raise ResourceExceeded("standard monomial enumeration too large")
            for v in range(nvars):
                nxt = e[:v] + (e[v] + 1,) + e[v + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    out.sort(key=lambda m: gb.order.key(m), reverse=True)
    return out


def krull_dimension_of_lms(lms, nvars) -> int:
    """Krull dimension of F[u]/in(I) via maximal independent sets; -1 for the unit ideal."""
    if any(not any(m) for m in lms):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
    for size in range(nvars, -1, -1):
        for S in combinations(range(nvars), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0
