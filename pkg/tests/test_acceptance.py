"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import itertools
import random
import time
from fractions import Fraction

import pytest

from perfchar.fontaine import projection_check, tilt, witness_check
from perfchar.groebner import ColimitIdeal, IdealHandle, LevelRing, RingPresentation, is_regular_sequence
from perfchar.hilbert_kunz import e_hk_estimate, euler_characteristic_sequence, hk_sequence, seibert_fit
from perfchar.homology import (
    cech_grade,
    complex_check,
    ext_grade,
    koszul_grade,
    perfection_pdim_bound,
    root_tower_complex,
    root_tower_exactness_witness,
    tor,
    vanish_check,
)
from perfchar.homology.perfection import sample_kernel_tuples
from perfchar.perfect_poly import frobenius, parse_poly, pth_root
from perfchar.reports import classify_curve
from perfchar.valuation import build_chain, ext1_chain_recovery, perfect_valuation
from perfchar.witt import (
    PerfectPolyRing,
    PrimeField,
    WittVector,
    isomorphism_table,
    verschiebung,
    witt_add,
    witt_frobenius,
    witt_mod_p_check,
    witt_scalar,
)

from .oracles import tor_over_node
from .test_groebner import REGULAR_SUITE
from .test_homology import GRADE_SUITE


@pytest.fixture
def criterion(capsys):
    """Run the body, time it, and print one PASS/FAIL line whatever happens."""

    class Runner:
        def __call__(self, number, label, body, limit=None):
            start = time.perf_counter()
            err = None
            try:
                body()
            except AssertionError as exc:
                err = exc
            elapsed = time.perf_counter() - start
            slow = limit is not None and elapsed >= limit
            ok = err is None and not slow
            note = f"{elapsed:.2f}s" + (f" (limit {limit}s)" if limit else "")
            with capsys.disabled():
                print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {label} [{note}]")
            if err is not None:
                raise err
            assert not slow, f"took {elapsed:.2f}s, limit {limit}s"

    return Runner()


def pres(p, variables=("x", "y"), rels=()):
    return RingPresentation.from_dict({"char": p, "vars": list(variables), "relations": list(rels)})


def ideal(R, text, level=0):
    return IdealHandle(LevelRing(R, level), R.polys(text) if text else [])


def test_truncated_complex_identity(criterion):
    def composite():
        for p in (2, 3, 5):
            assert root_tower_complex(parse_poly("x", p, ["x"]), 64).composite_is_zero()

    def recovery():
        for p in (2, 3, 5):
            T = root_tower_complex(parse_poly("x", p, ["x"]), 12)
            tuples = list(sample_kernel_tuples(T, 100, seed=p))
            assert len(tuples) == 100
            for b, a in tuples:
                w = root_tower_exactness_witness(a, T)
                assert w.ok and list(w.preimage) == list(b)

    criterion(1, "Y o X = 0 for p in {2,3,5}, N = 64", composite, limit=1.0)
    criterion(1, "kernel recovery on 100 tuples per p", recovery)


def test_tor2_on_node(criterion):
    def body():
        for p in (2, 3):
            A = pres(p, rels=["x*y"])
            for n in (0, 1, 2):
                got = tor(ideal(A, "x"), ideal(A, "y"), 2, level=n).dimension
                assert got == 1 == tor_over_node(2, p**n, p**n), (p, n, got)

    criterion(2, "dim Tor_2 = 1 over F_p[u,v]/(uv), p in {2,3}, n <= 2", body, limit=10.0)


def test_vanishing_harness(criterion):
    F2 = pres(2)
    pairs = [(("x", "y"), ("x", "y")), (("x",), ("y",)), (("x + y",), ("x",))]

    def body():
        for left, right in pairs:
            rep = vanish_check(ColimitIdeal(F2, left), ColimitIdeal(F2, right), samples=20, max_slack=4)
            assert rep.total == 20 and rep.all_found, (left, right)
            assert rep.observed_slack is not None and rep.observed_slack <= 4

    criterion(3, "three colimit pairs over F_2[x,y], 20/20 found, slack <= 4", body, limit=60.0)


def test_hilbert_kunz_rows(criterion):
    def body():
        rec = hk_sequence(ideal(pres(2), "x, y"), 4)
        assert [r.length for r in rec.rows] == [4**n for n in range(5)]
        est = e_hk_estimate(rec)
        assert est.candidate == 1 and all(r == 0 for r in est.residuals.values())
        rec = hk_sequence(ideal(pres(3, rels=["x*y"]), "x, y"), 4)
        assert [r.length for r in rec.rows] == [2 * 3**n - 1 for n in range(5)]
        est = e_hk_estimate(rec)
        assert est.candidate == 2 and all(r == 0 for n, r in est.residuals.items() if n >= 1)

    criterion(4, "q^2 and 2q-1 rows for n <= 4, e_HK estimates 1 and 2", body, limit=30.0)


def test_seibert_fits(criterion):
    def body():
        F2 = pres(2)
        chi = euler_characteristic_sequence(ideal(F2, "x, y"), ideal(F2, "x, y"), range(0, 4))
        assert set(chi.values()) == {0}
        fit = seibert_fit(chi, 2, 0)
        assert fit.exact and fit.residuals and all(fit.predict(n) == 0 for n in range(6))
        rec = hk_sequence(ideal(pres(3, rels=["x*y"]), "x, y"), 4)
        fit = seibert_fit([r.length for r in rec.rows], 3, 1)
        assert fit.coefficients == (-1, 2) and fit.exact and len(fit.residuals) == 3

    criterion(5, "chi = 0 and 2q-1 fit exactly on held-out rows", body)


def test_grade_consistency(criterion):
    def body():
        assert len(GRADE_SUITE) == 12
        for R, seq, mod in GRADE_SUITE:
            s = R.polys(seq)
            M = ideal(R, mod)
            k = koszul_grade(s, M).value
            assert k == cech_grade(s, M).value == ext_grade(IdealHandle(M.ring, s), M).value, (seq, mod)
            for perm in itertools.permutations(s):
                assert koszul_grade(list(perm), M).value == k
            assert koszul_grade([frobenius(f, 1) for f in s], M).value == k
            assert koszul_grade([pth_root(f, 1) for f in s], M.at_level(1)).value == k
        for p in (2, 3, 5):
            assert koszul_grade(pres(p).polys("x, y"), ideal(pres(p), "")).value == 2
            node = pres(p, rels=["x*y"])
            assert koszul_grade(node.polys("x, y"), ideal(node, "")).value == 1

    criterion(6, "Koszul = Cech = Ext grade on 12 instances, stable under permutation and powers", body)


def test_regular_sequence_lifting(criterion):
    def body():
        for R, text in REGULAR_SUITE:
            seq = R.polys(text)
            assert is_regular_sequence(seq, LevelRing(R, 0))
            for n in (1, 2, 3):
                for perm in itertools.permutations(seq):
                    assert is_regular_sequence(list(perm), LevelRing(R, n)), (text, n, perm)

    criterion(7, "regular sequences stay regular at levels 1-3 in every order", body)


def test_witt_arithmetic(criterion):
    def body():
        for p, n in ((2, 2), (2, 3), (3, 2)):
            tab = isomorphism_table(p, n)
            assert tab.ok, (p, n)
        rng = random.Random(0)
        for ring in (PrimeField(2), PrimeField(3), PerfectPolyRing(2, ("x",))):
            count = 50 if isinstance(ring, PrimeField) else 10
            for _ in range(count):
                a = WittVector(tuple(ring.random(rng) for _ in range(3)), ring, ring.p)
                assert witt_scalar(a, ring.p) == verschiebung(witt_frobenius(a))
            assert witt_mod_p_check(ring, 3, samples=10).ok
        a = WittVector((1, 1), PrimeField(2), 2)
        assert witt_add(a, a) == verschiebung(witt_frobenius(a))

    criterion(8, "W_2(F_2), W_3(F_2), W_2(F_3) tables, p*a = V(F(a)), mod-p check", body, limit=5.0)


def test_tilts(criterion):
    def body():
        for modulus, L, p in ((16, 4, 2), (27, 3, 3)):
            valid = tilt({"modulus": modulus}, L).enumerate_valid()
            assert len(valid) == p and all(len(set(e.coords)) == 1 for e in valid)
        assert projection_check(tilt({"char": 2, "vars": ["x"]}, 4), samples=10).ok
        assert projection_check(tilt({"modulus": 16}, 4)).ok
        w = witness_check(tilt({"char": 2, "vars": ["x"], "quotient": ["x"]}, 4), "x^(1/2)")
        assert w["valid"] and w["r0_nonzero"] and not w["zero_coordinates"]

    criterion(9, "constant tilts of Z/16 and Z/27, bijective projection, root witness", body)


def test_chain_valuation_bound(criterion):
    def body():
        rng = random.Random(1)
        for p in (2, 3):
            x = parse_poly("x", p, ["x"])
            for N in range(1, 9):
                tight = ext1_chain_recovery(build_chain(parse_poly("1", p, ["x"]), x, p, N), p, x)
                assert tight.bound_holds and tight.tight
                assert tight.v_a1.value == 1 - Fraction(1, p ** (N - 1))
                for _ in range(10):
                    exps = {Fraction(rng.randrange(0, 3 * p**N), p ** (N - 1)) for _ in range(3)}
                    text = " + ".join(f"x^({e})" for e in exps)
                    chain = build_chain(parse_poly(text, p, ["x"]), x, p, N)
                    rep = ext1_chain_recovery(chain, p, x)
                    assert rep.bound_holds
                    if perfect_valuation(chain[0]).value >= 1:
                        assert rep.recovered is not None
                        for k, ak in enumerate(chain, start=1):
                            assert rep.recovered * pth_root(x, k - 1) == ak

    criterion(10, "v(a_1) >= 1 - p^(1-N), tight at a_N = 1, recovery when v(a_1) >= 1", body)


def test_curve_classifier(criterion):
    def body():
        for p in (2, 3, 5, 7):
            R = pres(p, ("t", "u"), ["u^2 - t^3 - t^2"])
            N = pres(p, ("t", "s"), ["s^2 - t - 1"])
            rep = classify_curve(R, N, {"t": "t", "ts": "t*s"})
            dims = {r["quantity"]: r["value"] for r in rep.rows}
            if p == 2:
                assert rep.to_dict()["verdict"] == {"kind": "Coherent", "n": 1}
                assert (dims["gl_dim"], dims["w_dim"]) == (2, 1)
            else:
                assert rep.to_dict()["verdict"]["witness"] == "s"
                assert (dims["gl_dim"], dims["w_dim"]) == (3, 2)

    criterion(11, "curve family case split for p in {2,3,5,7}", body, limit=10.0)


def test_hypersurface_pdim_bound(criterion):
    def body():
        F2 = pres(2)
        for rels in (["x"], ["x + y"], ["x", "y"], ["x + y", "y"]):
            rep, total = perfection_pdim_bound(rels, F2, samples=10)
            m = len(rels)
            assert rep.length <= 2 * m and rep.bound == 2 * m
            assert complex_check(total) and rep.d_squared_zero
            assert rep.kernel_recovered == rep.kernel_samples
            assert all(r.all_found for r in rep.tor_reports)
            assert rep.passed

    criterion(12, "hypersurface complexes of length <= 2m with vanishing Tor_1 samples", body)
