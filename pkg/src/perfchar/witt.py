"""Truncated p-typical Witt vectors.

Sum, product and negation polynomials are built from the ghost identities
with exact integer division and cached on disk, one text file per (p, n).
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import platformdirs
from filelock import FileLock

from .errors import CharacteristicMismatch, ImperfectRing
from .perfect_poly import PerfPoly, is_prime, pth_root

# -- integer polynomials in X_0..X_{n-1}, Y_0..Y_{n-1}: {exponent tuple: int} ------------

def _padd(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _ppow(a: dict, k: int, nv: int) -> dict:
    result = {tuple([0] * nv): 1}
    base = a
    while k:
        if k & 1:
            result = _pmul(result, base)
        k >>= 1
        if k:
            base = _pmul(base, base)
    return result


def _var(i: int, nv: int) -> dict:
    e = [0] * nv
    e[i] = 1
    return {tuple(e): 1}


def ghost_poly(coords: list, p: int, i: int, nv: int) -> dict:
    """w_i = sum_{j<=i} p^j Z_j^(p^(i-j)) for polynomial coordinates Z_j."""
    out: dict = {}
    for j in range(i + 1):
        out = _padd(out, _ppow(coords[j], p ** (i - j), nv), p ** j)
    return out


def _solve_top(target: dict, lower: list, p: int, i: int, nv: int) -> dict:
    """Z_i with w_i(Z) = target given Z_0..Z_{i-1}; every division by p^i must be exact."""
    rest = target
    for j in range(i):
        rest = _padd(rest, _ppow(lower[j], p ** (i - j), nv), -(p ** j))
    q = p ** i
    out = {}
    for e, c in rest.items():
        if c % q:
            raise ArithmeticError(f"non-exact division by {q} building Witt polynomial {i}")
        out[e] = c // q
    return out


@dataclass(frozen=True)
class WittPolynomialCache:
    p: int
    n: int
    S: tuple
    P: tuple
    N: tuple  # negation, polynomials in X only (Y exponents zero)

    @property
    def nvars(self) -> int:
        return 2 * self.n

    def dumps(self) -> str:
        lines = [f"witt p={self.p} n={self.n}"]
        for name, fam in (("S", self.S), ("P", self.P), ("N", self.N)):
            for i, poly in enumerate(fam):
                lines.append(f"{name} {i} {len(poly)}")
                for e, c in sorted(poly.items()):
                    lines.append(" ".join([str(c)] + [str(x) for x in e]))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "WittPolynomialCache":
        lines = text.splitlines()
        head = dict(kv.split("=") for kv in lines[0].split()[1:])
        p, n = int(head["p"]), int(head["n"])
        fams = {"S": [], "P": [], "N": []}
        k = 1
        while k < len(lines):
            name, _, count = lines[k].split()
            k += 1
            poly = {}
            for line in lines[k:k + int(count)]:
                vals = [int(v) for v in line.split()]
                poly[tuple(vals[1:])] = vals[0]
            k += int(count)
            fams[name].append(poly)
        return cls(p, n, tuple(fams["S"]), tuple(fams["P"]), tuple(fams["N"]))


def build_witt_polys(p: int, n: int) -> WittPolynomialCache:
    nv = 2 * n
    X = [_var(i, nv) for i in range(n)]
    Y = [_var(n + i, nv) for i in range(n)]
    S, P, N = [], [], []
    for i in range(n):
        wx = ghost_poly(X, p, i, nv)
        wy = ghost_poly(Y, p, i, nv)
        S.append(_solve_top(_padd(wx, wy), S, p, i, nv))
        P.append(_solve_top(_pmul(wx, wy), P, p, i, nv))
        N.append(_solve_top({e: -c for e, c in wx.items()}, N, p, i, nv))
    return WittPolynomialCache(p, n, tuple(S), tuple(P), tuple(N))


def cache_dir() -> Path:
    env = os.environ.get("PERFCHAR_CACHE_DIR")
    return Path(env) if env else Path(platformdirs.user_cache_dir("perfchar"))


@lru_cache(maxsize=None)
def witt_polys(p: int, n: int) -> WittPolynomialCache:
    """Universal S_i, P_i (and negation) for W_n over p; read from or written to the disk cache."""
    if not is_prime(p) or n < 1:
        raise ValueError("need p prime and n >= 1")
    path = cache_dir() / f"witt_p{p}_n{n}.txt"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(str(path) + ".lock"):
            if path.exists():
                try:
                    cached = WittPolynomialCache.loads(path.read_text())
                    if cached.p == p and cached.n == n and len(cached.S) == n:
                        return cached
                except (ValueError, KeyError, IndexError):
                    pass
            built = build_witt_polys(p, n)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(built.dumps())
            tmp.replace(path)
            return built
    except OSError:
        # unwritable cache location: the cache is only an optimization
        return build_witt_polys(p, n)


# -- coefficient rings ----------------------------------------------------------------------

class PrimeField:
    """F_p with elements as ints in [0, p)."""

    perfect = True
    torsion_free = False

    def __init__(self, p: int):
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"F_{self.p}"

    def coerce(self, x):
        return int(x) % self.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def scale(self, a, c: int):
        return a * c % self.p

    def power(self, a, k: int):
        return pow(a, k, self.p)

    def pth_root(self, a):
        return a

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def elements(self):
        return range(self.p)

    def fmt(self, a) -> str:
        return str(a)


class PerfectPolyRing:
    """The perfection of F_p[vars] with PerfPoly elements."""

    perfect = True
    torsion_free = False

    def __init__(self, p: int, variables):
        self.p = p
        self.variables = tuple(variables)

    def __eq__(self, other):
        return isinstance(other, PerfectPolyRing) and (other.p, other.variables) == (self.p, self.variables)

    def __hash__(self):
        return hash(("Perf", self.p, self.variables))

    def __repr__(self):
        return f"F_{self.p}[{', '.join(self.variables)}]^perf"

    def coerce(self, x):
        if isinstance(x, PerfPoly):
            return x
        if isinstance(x, str):
            from .perfect_poly import parse_poly

            return parse_poly(x, self.p, self.variables)
        return PerfPoly.constant(int(x), self.p, self.variables)

    def zero(self):
        return PerfPoly.zero(self.p, self.variables)

    def one(self):
        return PerfPoly.one(self.p, self.variables)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c: int):
        return a.scale(c)

    def power(self, a, k: int):
        return a ** k

    def pth_root(self, a):
        return pth_root(a, 1)

    def is_zero(self, a) -> bool:
        return not a

    def random(self, rng: random.Random):
        from .homology.perfection import random_element

        return random_element(self.variables, self.p, rng, max_level=2, terms=2)

    def fmt(self, a) -> str:
        return str(a)


class IntegerLift:
    """Z as a p-torsion-free coefficient ring (ghost oracle only, not perfect)."""

    perfect = False
    torsion_free = True

    def __init__(self, p: int):
        self.p = p

    def __eq__(self, other):
        return isinstance(other, IntegerLift) and other.p == self.p

    def __hash__(self):
        return hash(("Z", self.p))

    def coerce(self, x):
        return int(x)

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def scale(self, a, c: int):
        return a * c

    def power(self, a, k: int):
        return a ** k

    def is_zero(self, a) -> bool:
        return a == 0

    def random(self, rng: random.Random):
        return rng.randint(-20, 20)

    def fmt(self, a) -> str:
        return str(a)


def _evaluate(poly: dict, values: list, ring):
    """Evaluate an integer polynomial at ring elements (coefficients reduced mod p in char p)."""
    acc = ring.zero()
    powers: dict = {}
    torsion_free = ring.torsion_free
    p = ring.p
    for e, c in poly.items():
        if not torsion_free:
            c %= p
            if not c:
                continue
        term = None
        for idx, k in enumerate(e):
            if not k:
                continue
            key = (idx, k)
            if key not in powers:
                powers[key] = ring.power(values[idx], k)
            term = powers[key] if term is None else ring.mul(term, powers[key])
            if ring.is_zero(term):
                break
        if term is None:
            term = ring.one()
        if ring.is_zero(term):
            continue
        acc = ring.add(acc, ring.scale(term, c))
    return acc


# -- Witt vectors ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WittVector:
    coords: tuple
    ring: object
    p: int

    def __post_init__(self):
        if not getattr(self.ring, "perfect", False) and not getattr(self.ring, "torsion_free", False):
            raise ImperfectRing(f"{self.ring!r} is not a perfect coefficient ring")
        object.__setattr__(self, "coords", tuple(self.ring.coerce(c) for c in self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __add__(self, other):
        return witt_add(self, other)

    def __mul__(self, other):
        return witt_mul(self, other)

    def __neg__(self):
        return witt_neg(self)

    def __sub__(self, other):
        return witt_add(self, witt_neg(other))

    def __str__(self):
        return "(" + ", ".join(self.ring.fmt(c) for c in self.coords) + ")"


def witt_vector(coords, ring=None, p: int | None = None) -> WittVector:
    if ring is None:
        ring = PrimeField(p)
    return WittVector(tuple(coords), ring, ring.p)


def _check(a: WittVector, b: WittVector):
    if a.p != b.p or a.n != b.n or a.ring != b.ring:
        raise CharacteristicMismatch("Witt vectors differ in p, length or coefficient ring")


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    _check(a, b)
    polys = witt_polys(a.p, a.n)
    vals = list(a.coords) + list(b.coords)
    return WittVector(tuple(_evaluate(s, vals, a.ring) for s in polys.S), a.ring, a.p)


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    _check(a, b)
    polys = witt_polys(a.p, a.n)
    vals = list(a.coords) + list(b.coords)
    return WittVector(tuple(_evaluate(s, vals, a.ring) for s in polys.P), a.ring, a.p)


def witt_neg(a: WittVector) -> WittVector:
    polys = witt_polys(a.p, a.n)
    vals = list(a.coords) + [a.ring.zero()] * a.n
    return WittVector(tuple(_evaluate(s, vals, a.ring) for s in polys.N), a.ring, a.p)


def witt_zero(ring, n: int) -> WittVector:
    return WittVector(tuple([ring.zero()] * n), ring, ring.p)


def witt_one(ring, n: int) -> WittVector:
    return teichmuller(ring.one(), ring, n)


def teichmuller(r, ring, n: int) -> WittVector:
    return WittVector((ring.coerce(r),) + tuple([ring.zero()] * (n - 1)), ring, ring.p)


def verschiebung(a: WittVector) -> WittVector:
    return WittVector((a.ring.zero(),) + a.coords[:-1], a.ring, a.p)


def witt_frobenius(a: WittVector) -> WittVector:
    """Coordinatewise p-th power; this is the Witt Frobenius only in characteristic p."""
    if a.ring.torsion_free:
        raise ImperfectRing("coordinatewise Frobenius is only the Witt Frobenius in characteristic p")
    return WittVector(tuple(a.ring.power(c, a.p) for c in a.coords), a.ring, a.p)


def witt_scalar(a: WittVector, k: int) -> WittVector:
    """k * a by repeated addition (double-and-add)."""
    if k < 0:
        return witt_scalar(witt_neg(a), -k)
    result = witt_zero(a.ring, a.n)
    base = a
    while k:
        if k & 1:
            result = witt_add(result, base)
        k >>= 1
        if k:
            base = witt_add(base, base)
    return result


def ghost(a: WittVector) -> tuple:
    """(w_0(a), ..., w_{n-1}(a)) over a p-torsion-free coefficient ring."""
    if not a.ring.torsion_free:
        raise ImperfectRing("ghost components need a p-torsion-free coefficient ring")
    p = a.p
    out = []
    for i in range(a.n):
        acc = a.ring.zero()
        for j in range(i + 1):
            acc = a.ring.add(acc, a.ring.scale(a.ring.power(a.coords[j], p ** (i - j)), p ** j))
        out.append(acc)
    return tuple(out)


def integer_lift(a: WittVector) -> WittVector:
    """Coordinates of a Witt vector over F_p lifted to integers in [0, p)."""
    return WittVector(tuple(int(c) for c in a.coords), IntegerLift(a.p), a.p)


def to_integer_mod(a: WittVector) -> int:
    """W_n(F_p) -> Z/p^n via the last ghost component of an integer lift."""
    if not isinstance(a.ring, PrimeField):
        raise ValueError("only defined over F_p")
    return ghost(integer_lift(a))[-1] % a.p ** a.n


def all_vectors(ring: PrimeField, n: int):
    from itertools import product as iproduct

    for coords in iproduct(range(ring.p), repeat=n):
        yield WittVector(coords, ring, ring.p)


@dataclass(frozen=True)
class IsomorphismTable:
    p: int
    n: int
    bijective: bool
    additive_failures: int
    multiplicative_failures: int
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return self.bijective and not self.additive_failures and not self.multiplicative_failures

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "target": f"Z/{self.p ** self.n}",
            "bijective": self.bijective,
            "pairs_checked": self.pairs_checked,
            "additive_failures": self.additive_failures,
            "multiplicative_failures": self.multiplicative_failures,
            "isomorphism": self.ok,
        }


def isomorphism_table(p: int, n: int) -> IsomorphismTable:
    """Full addition and multiplication tables of W_n(F_p) against Z/p^n."""
    F = PrimeField(p)
    vecs = list(all_vectors(F, n))
    images = [to_integer_mod(v) for v in vecs]
    mod = p ** n
    bij = sorted(images) == list(range(mod))
    add_fail = mul_fail = 0
    for a, ia in zip(vecs, images):
        for b, ib in zip(vecs, images):
            if to_integer_mod(witt_add(a, b)) != (ia + ib) % mod:
                add_fail += 1
            if to_integer_mod(witt_mul(a, b)) != (ia * ib) % mod:
                mul_fail += 1
    return IsomorphismTable(p, n, bij, add_fail, mul_fail, len(vecs) ** 2)


@dataclass(frozen=True)
class ModPReport:
    ring: str
    n: int
    samples: int
    additive: int
    multiplicative: int
    kernel_is_p_multiples: int
    p_multiples_in_kernel: int

    @property
    def ok(self) -> bool:
        s = self.samples
        return (self.additive == s and self.multiplicative == s
                and self.kernel_is_p_multiples == s and self.p_multiples_in_kernel == s)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "n": self.n,
            "samples": self.samples,
            "additive": self.additive,
            "multiplicative": self.multiplicative,
            "kernel_elements_divisible_by_p": self.kernel_is_p_multiples,
            "p_multiples_in_kernel": self.p_multiples_in_kernel,
            "passed": self.ok,
        }


def witt_mod_p_check(ring, n: int, samples: int = 20, seed: int = 0) -> ModPReport:
    """Sampled check that a -> a_0 induces W_n(R)/p W_n(R) = R."""
    if not ring.perfect:
        raise ImperfectRing(f"{ring!r} is not perfect")
    rng = random.Random(seed)
    p = ring.p
    add_ok = mul_ok = ker_ok = pm_ok = 0
    for _ in range(samples):
        a = WittVector(tuple(ring.random(rng) for _ in range(n)), ring, p)
        b = WittVector(tuple(ring.random(rng) for _ in range(n)), ring, p)
        s, m = witt_add(a, b), witt_mul(a, b)
        add_ok += s.coords[0] == ring.add(a.coords[0], b.coords[0])
        mul_ok += m.coords[0] == ring.mul(a.coords[0], b.coords[0])
        # a kernel element (0, a_1, ...) is p * c with c_k = a_{k+1}^(1/p)
        k = WittVector((ring.zero(),) + a.coords[1:], ring, p)
        c = WittVector(tuple(ring.pth_root(x) for x in k.coords[1:]) + (ring.zero(),), ring, p)
        ker_ok += witt_scalar(c, p) == k
        pb = witt_scalar(b, p)
        pm_ok += ring.is_zero(pb.coords[0]) and pb == verschiebung(witt_frobenius(b))
    return ModPReport(repr(ring), n, samples, add_ok, mul_ok, ker_ok, pm_ok)
