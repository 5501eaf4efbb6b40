import pytest
from hypothesis import given
from hypothesis import strategies as st

from perfchar.errors import ConstraintViolation, ImperfectRing, PresentationError
from perfchar.fontaine import PerfectionQuotient, ResidueOfIntegers, projection_check, tilt, witness_check
from perfchar.groebner import RingPresentation

F2X = {"char": 2, "vars": ["x"], "relations": []}


@pytest.mark.parametrize("modulus, L, p", [(16, 4, 2), (27, 3, 3), (25, 3, 5), (2, 2, 2)])
def test_integer_residue_tilts_are_constant(modulus, L, p):
    T = tilt({"modulus": modulus}, L)
    assert T.p == p
    valid = T.enumerate_valid()
    assert len(valid) == p
    assert all(len(set(e.coords)) == 1 for e in valid)


def test_bad_modulus_is_rejected():
    with pytest.raises(PresentationError):
        tilt({"modulus": 12}, 2)
    with pytest.raises(ValueError):
        tilt({"modulus": 4}, 0)


def test_constraint_violation():
    T = tilt({"modulus": 9}, 3)
    with pytest.raises(ConstraintViolation):
        T.element([1, 2, 1])
    with pytest.raises(ConstraintViolation):
        T.element([1, 1])
    assert T.violation([1, 2, 2]) == 0
    T2 = tilt(dict(F2X, quotient=["x"]), 3)
    with pytest.raises(ConstraintViolation):
        T2.element(["x^(1/2)", "x^(1/2)", "x^(1/8)"])


@pytest.mark.parametrize("ring_data, L", [({"modulus": 16}, 4), ({"modulus": 27}, 3), (F2X, 3),
                                     ({"char": 3, "vars": ["x", "y"]}, 2)])
def test_projection_is_bijective_on_perfect_residues(ring_data, L):
    rep = projection_check(tilt(ring_data, L), samples=8, seed=1)
    assert rep.ok
    d = rep.to_dict()
    assert d["bijective_on_samples"] and d["samples"] == 8


def test_projection_requires_perfect_residue():
    with pytest.raises(ImperfectRing):
        projection_check(tilt(dict(F2X, quotient=["x"]), 3))


@pytest.mark.parametrize("L", [3, 4, 5])
def test_root_witness_in_quotient(L):
    T = tilt(dict(F2X, quotient=["x"]), L)
    w = witness_check(T, "x^(1/2)")
    assert w["valid"] and w["r0_nonzero"] and w["zero_coordinates"] == []
    assert w["coords"][:3] == ["x^(1/2)", "x^(1/4)", "x^(1/8)"]


def test_zero_coordinates_are_reported():
    T = tilt(dict(F2X, quotient=["x"]), 3)
    w = witness_check(T, "x^2")
    assert w["zero_coordinates"] == [0, 1] and not w["r0_nonzero"]


def test_presentation_and_residue_inputs_agree():
    R = RingPresentation.from_dict(F2X)
    a = tilt(R, 3)
    b = tilt(PerfectionQuotient(R), 3)
    assert a.describe() == b.describe()
    assert tilt(ResidueOfIntegers(3, 2), 2).describe() == "E_2(Z/3^2)"


roots = st.sampled_from(["x", "x^(1/2)", "x + 1", "x^(3/4) + x^2", "0", "1"])


@given(roots, roots)
def test_coordinatewise_operations_stay_valid(a, b):
    T = tilt(dict(F2X, quotient=["x^2"]), 3)
    u, v = T.from_root(a), T.from_root(b)
    s, m = u + v, u * v
    assert T.violation(s.coords) is None and T.violation(m.coords) is None
    assert s == T.from_root(T.residue.add(T.residue.coerce(a), T.residue.coerce(b)))
    assert u + T.zero() == u
