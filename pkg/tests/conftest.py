from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from perfchar.perfect_poly import PerfPoly

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    monkeypatch.setenv("PERFCHAR_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "witt-cache"))


def exponents(p, max_level=2, max_num=6):
    return st.builds(lambda a, k: Fraction(a, p**k), st.integers(0, max_num), st.integers(0, max_level))


@st.composite
def perf_polys(draw, p=2, variables=("x", "y"), max_level=2, max_terms=4, max_num=6):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        mono = tuple(draw(exponents(p, max_level, max_num)) for _ in variables)
        terms[mono] = (terms.get(mono, 0) + draw(st.integers(1, p - 1))) % p
    return PerfPoly(p, variables, terms)
