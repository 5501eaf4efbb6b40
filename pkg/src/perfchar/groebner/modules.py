"""Submodules of free modules over a quotient F_p[u]/J, in rescaled integer exponents.

Vectors are lists of polynomial dicts ``{exp: coeff}``; ``relations`` is the
list of generators of J.  All routines return deterministic results.
"""

from __future__ import annotations

from .core import (
    DEFAULT_PAIR_BUDGET,
    GroebnerBasis,
    MonomialOrder,
    count_standard_monomials,
)


def poly_to_vec_entry(f: dict, comp: int) -> dict:
    return {(comp, e): c for e, c in f.items()}


def vector_to_element(vec, offset: int = 0) -> dict:
    out = {}
    for i, f in enumerate(vec):
        for e, c in f.items():
            out[(i + offset, e)] = c
    return out


def element_to_vector(el: dict, rank: int, offset: int = 0) -> list:
    vec = [dict() for _ in range(rank)]
    for (comp, e), c in el.items():
        vec[comp - offset][e] = c
    return vec


def _relation_elements(relations, rank, offset=0):
    return [poly_to_vec_entry(r, offset + k) for k in range(rank) for r in relations if r]


class Submodule:
    """Submodule of (F_p[u]/J)^rank generated by the given vectors."""

    def __init__(self, gens, rank: int, nvars: int, p: int, relations=(), budget=DEFAULT_PAIR_BUDGET):
        self.gens = [list(g) for g in gens]
        self.rank = rank
        self.nvars = nvars
        self.p = p
        self.relations = [r for r in relations if r]
        self.budget = budget
        self._gb = None

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            els = [vector_to_element(g) for g in self.gens]
            els += _relation_elements(self.relations, self.rank)
            els = [e for e in els if e]
            self._gb = GroebnerBasis.compute(els, MonomialOrder(self.nvars, module="pot"), self.p, self.budget)
        return self._gb

    def contains(self, vec) -> bool:
        el = vector_to_element(vec)
        return not el or self.gb.contains(el)

    def reduce(self, vec):
        return element_to_vector(self.gb.reduce(vector_to_element(vec)), self.rank)

    def quotient_dimension(self):
        """dim over F_p of (F_p[u]/J)^rank / self, or None if infinite."""
        return count_standard_monomials(self.gb, self.nvars, self.rank)

    def is_everything(self) -> bool:
        return all(self.contains([{tuple([0] * self.nvars): 1} if k == i else {} for k in range(self.rank)])
                   for i in range(self.rank))


def is_zero_vector(vec) -> bool:
    return all(not f for f in vec)


def kernel(matrix, ncols: int, nvars: int, p: int, relations=(), budget=DEFAULT_PAIR_BUDGET, minimize=True):
    """Generators of {c in R^ncols : matrix * c = 0 in R^nrows}, R = F_p[u]/J.

    ``matrix`` is a list of rows, each a list of ``ncols`` polynomial dicts.
    """
    nrows = len(matrix)
    relations = [r for r in relations if r]
    els = []
    for j in range(ncols):
        el = {}
        for r in range(nrows):
            for e, c in matrix[r][j].items():
                el[(r, e)] = c
        el[(nrows + j, tuple([0] * nvars))] = 1
        els.append(el)
    els += _relation_elements(relations, nrows)
    gb = GroebnerBasis.compute(els, MonomialOrder(nvars, module="pot"), p, budget)
    gens = []
    for el, lm in zip(gb.elements, gb.lms):
        if lm[0] >= nrows:
            gens.append(element_to_vector(el, ncols, offset=nrows))
    return prune_generators(gens, ncols, nvars, p, relations, budget) if minimize else gens


def prune_generators(gens, rank, nvars, p, relations=(), budget=DEFAULT_PAIR_BUDGET):
    """Drop generators that are zero mod J or lie in the span of the ones kept."""
    relations = [r for r in relations if r]
    kept = []
    current = Submodule([], rank, nvars, p, relations, budget)
    for g in gens:
        if current.contains(g):
            continue
        kept.append(g)
        current = Submodule(kept, rank, nvars, p, relations, budget)
    # second pass: drop earlier generators made redundant by later ones
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if Submodule(others, rank, nvars, p, relations, budget).contains(kept[i]):
            kept = others
        else:
            i += 1
    return kept


def apply_matrix(matrix, vec, p: int):
    """matrix * vec over the free polynomial ring."""
    out = []
    for row in matrix:
        acc: dict = {}
        for entry, v in zip(row, vec):
            if not entry or not v:
                continue
            for e1, c1 in entry.items():
                for e2, c2 in v.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    c = (acc.get(e, 0) + c1 * c2) % p
                    if c:
                        acc[e] = c
                    else:
                        acc.pop(e, None)
        out.append(acc)
    return out


def homology_presentation(kernel_gens, image_gens, rank, nvars, p, relations=(), budget=DEFAULT_PAIR_BUDGET):
    """Presentation of ker/im as a quotient of R^s, s = len(kernel_gens).

    Returns the submodule N of R^s with ker/im = R^s / N.
    """
    s = len(kernel_gens)
    if s == 0:
        return None
    # columns: kernel generators, then image generators; find c with sum c_i k_i in im + J
    cols = list(kernel_gens) + list(image_gens)
    matrix = [[cols[j][r] for j in range(len(cols))] for r in range(rank)]
    syz = kernel(matrix, len(cols), nvars, p, relations, budget, minimize=False)
    rel_gens = [v[:s] for v in syz]
    return Submodule(rel_gens, s, nvars, p, relations, budget)
