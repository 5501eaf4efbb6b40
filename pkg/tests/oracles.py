"""Independent reference computations used only by the tests.

Nothing here shares code with the library beyond the PerfPoly container.
"""

from itertools import product as cartesian

import sympy


def rank_mod_p(rows, p):
    """Row rank of an integer matrix over F_p by plain elimination."""
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [(a - c * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def monomials_up_to(nvars, degree):
    return [e for e in cartesian(range(degree + 1), repeat=nvars) if sum(e) <= degree]


def _poly_mul(a, b, p):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            out[m] = (out.get(m, 0) + c1 * c2) % p
    return {m: c for m, c in out.items() if c}


def naive_membership(f, gens, p, degree):
    """f in (gens) decided by linear algebra on all products monomial * generator up to degree.

    Inputs are integer-exponent dicts. Sound for "True"; "False" is exact once
    degree exceeds the degree of a certificate, which the caller chooses large enough.
    """
    nvars = len(next(iter(f))) if f else len(next(iter(gens[0])))
    span = []
    for g in gens:
        gdeg = max(sum(m) for m in g)
        for mono in monomials_up_to(nvars, max(degree - gdeg, 0)):
            span.append(_poly_mul(g, {mono: 1}, p))
    support = sorted({m for v in span + [f] for m in v})
    idx = {m: i for i, m in enumerate(support)}
    def vec(d):
        row = [0] * len(support)
        for m, c in d.items():
            row[idx[m]] = c
        return row
    base = [vec(v) for v in span]
    return rank_mod_p(base, p) == rank_mod_p(base + [vec(f)], p)


def sympy_groebner(polys_text, gens, p):
    syms = sympy.symbols(gens)
    G = sympy.groebner([sympy.sympify(t.replace("^", "**")) for t in polys_text], *syms,
                       modulus=p, order="grevlex")
    return {str(sympy.Poly(g, *syms, modulus=p).as_expr()) for g in G.exprs}, G, syms


def standard_monomial_count(lead_exponents, bound):
    """Count monomials in a box not divisible by any leading exponent."""
    nvars = len(lead_exponents[0])
    count = 0
    for e in cartesian(range(bound), repeat=nvars):
        if not any(all(a >= b for a, b in zip(e, le)) for le in lead_exponents):
            count += 1
    return count


def tor_over_node(i, a, b, box=None):
    """dim Tor_i(R/(u^a), R/(v^b)) over R = k[u,v]/(uv), for i >= 1.

    R/(u^a) has the resolution R <-u^a- R <-v- R <-u- R <-v- ..., because the
    annihilator of u^a is (v) and that of v is (u).  Tensoring with
    S = R/(v^b) gives multiplication maps on S.  Every bidegree of S is at most
    one-dimensional (the monomial u^s v^t with s*t = 0 and t < b), so homology
    is counted bidegree by bidegree inside a box large enough to contain it.
    """
    box = box or 2 * (a + b) + 4

    def present(s, t):
        return s >= 0 and t >= 0 and s * t == 0 and t < b

    def shift(k):
        if k == 1:
            return (a, 0)
        return (0, 1) if k % 2 == 0 else (1, 0)

    total = 0
    for s in range(box):
        for t in range(box):
            if not present(s, t):
                continue
            ds, dt = shift(i)
            in_kernel = not present(s + ds, t + dt)
            es, et = shift(i + 1)
            in_image = present(s - es, t - et)
            total += in_kernel and not in_image
    return total
