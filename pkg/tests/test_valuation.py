import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perfchar.errors import MultiVariable, RelationViolated
from perfchar.perfect_poly import PerfPoly, frobenius, parse_poly, pth_root
from perfchar.valuation import (
    build_chain,
    chain_step,
    divide_by_monomial,
    ext1_chain_recovery,
    geometric_bound,
    perfect_valuation,
)

from .conftest import perf_polys


def P(text, p=2):
    return parse_poly(text, p, ["x"])


def test_valuation_examples():
    assert str(perfect_valuation(P("x^(3/4) + x"))) == "3/4"
    assert perfect_valuation(P("0")).infinite
    assert perfect_valuation(P("1")).value == 0
    assert str(perfect_valuation(P("x^(1/3) + x^2", 3))) == "1/3"
    assert perfect_valuation(P("x^(1/2) + x^3"), truncation=Fraction(1, 4)).infinite
    assert perfect_valuation(P("x^(1/2) + x^3"), truncation=1).value == Fraction(1, 2)


def test_valuation_needs_one_variable():
    with pytest.raises(MultiVariable):
        perfect_valuation(parse_poly("x + y", 2, ["x", "y"]))


one_var = st.sampled_from([2, 3]).flatmap(lambda p: st.tuples(
    st.just(p), perf_polys(p, ("x",), max_level=3, max_terms=3), perf_polys(p, ("x",), max_level=3, max_terms=3)))


@settings(max_examples=200)
@given(one_var)
def test_valuation_is_multiplicative_and_ultrametric(data):
    _, f, g = data
    vf, vg = perfect_valuation(f), perfect_valuation(g)
    assert perfect_valuation(f * g) == vf + vg
    vs = perfect_valuation(f + g)
    if not (vf.infinite or vg.infinite):
        assert vs.infinite or vs.value >= min(vf.value, vg.value)
        if vf.value != vg.value:
            assert vs.value == min(vf.value, vg.value)
    elif vf.infinite:
        assert vs == vg


@given(one_var)
def test_valuation_scales_with_frobenius(data):
    p, f, _ = data
    v = perfect_valuation(f)
    if v.infinite:
        return
    assert perfect_valuation(frobenius(f, 1)).value == p * v.value
    assert perfect_valuation(pth_root(f, 1)).value == v.value / p


def test_chain_examples():
    x = P("x")
    tight = ext1_chain_recovery(build_chain(P("1"), x, 2, 4), 2, x)
    assert tight.v_a1.value == Fraction(7, 8) and tight.tight and tight.bound_holds
    assert tight.recovered is None
    lifted = ext1_chain_recovery(build_chain(P("x^(1/8)"), x, 2, 4), 2, x)
    assert lifted.v_a1.value == 1 and lifted.recovered == P("1")
    assert lifted.to_dict()["bound"] == "7/8"
    zero = ext1_chain_recovery([P("0")] * 3, 2, x)
    assert zero.v_a1.infinite and zero.bound_holds


def test_chain_step_values():
    assert chain_step(P("x"), 2, 1) == P("x^(1/2)")
    assert chain_step(P("x", 3), 3, 2) == P("x^(2/9)", 3)
    assert geometric_bound(3, 3) == Fraction(8, 9)


def test_relation_violation_reports_index():
    x = P("x")
    a = list(build_chain(P("1"), x, 2, 4))
    a[1] = a[1] + P("1")
    with pytest.raises(RelationViolated) as err:
        ext1_chain_recovery(a, 2, x)
    assert err.value.index == 1
    a = list(build_chain(P("1"), x, 2, 4))
    a[2] = P("x")
    with pytest.raises(RelationViolated) as err:
        ext1_chain_recovery(a, 2, x)
    assert err.value.index == 2


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("N", range(2, 9))
def test_bound_holds_for_random_chains(p, N):
    rng = random.Random(p * 100 + N)
    x = P("x", p)
    for _ in range(10):
        terms = {(Fraction(rng.randrange(0, 3 * p**N), p ** (N - 1)),): rng.randrange(1, p) for _ in range(3)}
        a_N = PerfPoly(p, ("x",), terms)
        rep = ext1_chain_recovery(build_chain(a_N, x, p, N), p, x)
        assert rep.bound_holds
        if perfect_valuation(a_N).value == 0:
            assert rep.tight
        if rep.recovered is not None:
            for k, ak in enumerate(build_chain(a_N, x, p, N), start=1):
                assert rep.recovered * pth_root(x, k - 1) == ak


def test_divide_by_monomial():
    assert divide_by_monomial(P("x^2 + x^(3/2)"), P("x")) == P("x + x^(1/2)")
    assert divide_by_monomial(P("x^(1/2)"), P("x")) is None
    assert divide_by_monomial(P("x"), P("x + 1")) is None
