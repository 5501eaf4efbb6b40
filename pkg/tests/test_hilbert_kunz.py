from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from perfchar.errors import InfiniteColength, InsufficientRows, NotPPower
from perfchar.groebner import IdealHandle, LevelRing, RingPresentation
from perfchar.groebner.ideals import ideal_contains_ideal
from perfchar.hilbert_kunz import (
    HKRecord,
    HKRow,
    bracket_power,
    e_hk_estimate,
    euler_characteristic_sequence,
    hk_sequence,
    peskine_szpiro,
    seibert_fit,
    solve_exact,
)

from .oracles import standard_monomial_count


def pres(p, rels=(), variables=("x", "y")):
    return RingPresentation.from_dict({"char": p, "vars": list(variables), "relations": list(rels)})


def ideal(R, text):
    return IdealHandle(LevelRing(R, 0), R.polys(text))


def same_ideal(I, J):
    return ideal_contains_ideal(I, J) and ideal_contains_ideal(J, I)


def sympy_colength(gens, p, box):
    """Standard monomials of the sympy Groebner basis, counted in a box."""
    x, y = sympy.symbols("x y")
    G = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], x, y, modulus=p, order="grevlex")
    leads = [sympy.Poly(g, x, y).monoms(order="grevlex")[0] for g in G.exprs]
    return standard_monomial_count(leads, box)


def test_bracket_power_examples():
    F2 = pres(2)
    assert same_ideal(bracket_power(ideal(F2, "x, y"), 4), ideal(F2, "x^4, y^4"))
    assert same_ideal(bracket_power(ideal(F2, "x + y"), 2), ideal(F2, "x^2 + y^2"))
    I = ideal(F2, "x^2 + y, x*y")
    assert bracket_power(I, 1).generators == I.generators
    with pytest.raises(NotPPower):
        bracket_power(I, 6)


@given(st.integers(0, 2), st.integers(0, 2), st.sampled_from(["x + y", "x^2, y", "x*y + x, y^2"]))
def test_bracket_powers_compose(a, b, text):
    R = pres(3)
    I = ideal(R, text)
    q1, q2 = 3**a, 3**b
    assert bracket_power(bracket_power(I, q1), q2).generators == bracket_power(I, q1 * q2).generators


def test_peskine_szpiro_examples():
    F2 = pres(2)
    assert same_ideal(peskine_szpiro(ideal(F2, "x, y"), 1), ideal(F2, "x^2, y^2"))
    I = ideal(F2, "x + y^3")
    assert peskine_szpiro(I, 0).generators == I.generators
    node = pres(3, ["x*y"])
    assert same_ideal(peskine_szpiro(ideal(node, "x, y"), 1), ideal(node, "x^3, y^3"))


def test_hk_sequence_polynomial_ring():
    rec = hk_sequence(ideal(pres(2), "x, y"), 4)
    assert rec.d == 2
    assert [r.length for r in rec.rows] == [4**n for n in range(5)]
    assert all(r.ratio == 1 for r in rec.rows)


def test_hk_sequence_node():
    rec = hk_sequence(ideal(pres(3, ["x*y"]), "x, y"), 4)
    assert rec.d == 1
    assert [r.length for r in rec.rows] == [2 * 3**n - 1 for n in range(5)]
    assert rec.rows[-1].ratio == Fraction(2 * 81 - 1, 81)


def test_hk_sequence_one_variable():
    rec = hk_sequence(ideal(pres(2, variables=("x",)), "x^2"), 4)
    assert rec.d == 1 and all(r.ratio == 2 for r in rec.rows)


@pytest.mark.parametrize("gens, p", [(["x^2", "y^3"], 2), (["x^2 + y", "y^2"], 3), (["x*y", "x^3 + y^3"], 2)])
def test_colengths_match_sympy_staircase(gens, p):
    rec = hk_sequence(ideal(pres(p), ", ".join(gens)), 2)
    for r in rec.rows:
        bracket = [f"({g})^{r.q}" for g in gens]
        assert r.length == sympy_colength(bracket, p, 4 * r.q * 3 + 4)


def test_infinite_colength_is_rejected():
    with pytest.raises(InfiniteColength):
        hk_sequence(ideal(pres(2), "x"), 2)


@pytest.mark.parametrize("text, p, rels", [
    ("x, y", 2, []), ("x, y", 3, ["x*y"]), ("x^2, y", 2, []), ("x, y", 2, ["x^2 - y^3"]),
    ("x + y, x*y", 3, []),
])
def test_lengths_nondecreasing(text, p, rels):
    rec = hk_sequence(ideal(pres(p, rels), text), 3)
    lengths = [r.length for r in rec.rows]
    assert lengths == sorted(lengths)


def test_estimates_are_exact():
    est = e_hk_estimate(hk_sequence(ideal(pres(2), "x, y"), 4))
    assert est.candidate == 1 and all(r == 0 for r in est.residuals.values())
    est = e_hk_estimate(hk_sequence(ideal(pres(3, ["x*y"]), "x, y"), 4))
    assert est.candidate == 2 and est.coefficients == (2, -1)
    assert all(r == 0 for n, r in est.residuals.items() if n >= 1)


@pytest.mark.parametrize("p, rels, text", [
    (2, [], "x^2, x*y, y^2"), (3, ["x*y"], "x^2, y"), (2, ["x^2 + y^2"], "x, y"), (5, [], "x, y^2"),
])
def test_binomial_examples_give_exact_rationals(p, rels, text):
    est = e_hk_estimate(hk_sequence(ideal(pres(p, rels), text), 3))
    assert not est.inconclusive
    assert isinstance(est.candidate, Fraction)


def test_estimate_needs_rows():
    rec = hk_sequence(ideal(pres(2), "x, y"), 1)
    with pytest.raises(InsufficientRows):
        e_hk_estimate(rec)


def test_estimate_inconclusive_on_irregular_data():
    rows = tuple(HKRow(n, 2**n, L, Fraction(L, 2**n)) for n, L in enumerate([1, 2, 5, 8, 17, 31]))
    rec = HKRecord(pres(2), (), 1, rows)
    assert e_hk_estimate(rec).inconclusive


def test_seibert_examples():
    chi = euler_characteristic_sequence(ideal(pres(2), "x, y"), ideal(pres(2), "x, y"), range(1, 4))
    assert list(chi.values()) == [0, 0, 0]
    fit = seibert_fit(chi, 2, 0)
    assert fit.coefficients == (0,) and fit.exact
    fit = seibert_fit([4**n for n in range(5)], 2, 2)
    assert fit.coefficients == (0, 0, 1) and fit.exact
    fit = seibert_fit([2 * 3**n - 1 for n in range(4)], 3, 1)
    assert fit.coefficients == (-1, 2) and fit.exact
    assert fit.predict(5) == 2 * 3**5 - 1


def test_seibert_needs_points():
    with pytest.raises(InsufficientRows):
        seibert_fit([1, 2], 2, 1)


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3), st.sampled_from([2, 3, 5]))
def test_seibert_recovers_any_exact_polynomial(coeffs, p):
    data = [sum(b * p ** (i * n) for i, b in enumerate(coeffs)) for n in range(5)]
    fit = seibert_fit(data, p, 2)
    assert list(fit.coefficients) == coeffs and fit.exact


def test_solve_exact_matches_sympy():
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    b = [1, 2, 3]
    ours = solve_exact(A, b)
    theirs = sympy.Matrix(A).LUsolve(sympy.Matrix(b))
    assert [sympy.Rational(x.numerator, x.denominator) for x in ours] == list(theirs)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cusp_is_polynomial_only_from_level_one(p):
    rec = hk_sequence(ideal(pres(p, ["x^2 - y^3"]), "x, y"), 3)
    for r in rec.rows:
        assert r.length == sympy_colength(["x^2 - y^3", f"x^{r.q}", f"y^{r.q}"], p, 3 * r.q + 4)
    est = e_hk_estimate(rec)
    assert est.candidate == 2 and est.residuals[0] == -1
    assert all(v == 0 for n, v in est.residuals.items() if n >= 1)
