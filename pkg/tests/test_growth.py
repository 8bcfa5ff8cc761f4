import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitorus.errors import BadDegree, NotKahler, NotUnipotent
from unitorus.gallery import full_jordan, random_unipotent_group
from unitorus.growth import (
    expansion_classes,
    fitted_slope,
    general_bound,
    generic_top_index,
    growth_exponent,
    growth_exponent_direct,
    improved_bound,
    norm_growth_sample,
    random_kahler,
    verify_growth_bounds,
)
from unitorus.hodge import HermitianClass, TorusAutomorphism, TorusModel, pullback_hermitian
from unitorus.linalg import ExactMatrix


@pytest.mark.parametrize("n", [2, 3, 4])
def test_full_jordan_saturates_h11(n):
    g = full_jordan(n).automorphisms()[0]
    assert growth_exponent(g, 1, 1) == 2 * (n - 1) == general_bound(n, 1, 1)
    assert growth_exponent_direct(g, 1, 1) == 2 * (n - 1)


def test_full_jordan_table_n3():
    g = full_jordan(3).automorphisms()[0]
    table = {(p, q): growth_exponent(g, p, q) for p in range(4) for q in range(4)}
    assert table[(0, 0)] == 0 and table[(3, 3)] == 0
    assert table[(1, 0)] == 2 and table[(0, 1)] == 2
    assert table[(2, 2)] == table[(1, 1)] == 4


@given(st.integers(1, 3), st.integers(0, 2**32))
def test_kronecker_exponent_matches_jordan_profile(n, seed):
    g = random_unipotent_group(n, 1, seed).automorphisms()[0]
    for p in range(n + 1):
        for q in range(n + 1):
            assert growth_exponent(g, p, q) == growth_exponent_direct(g, p, q)


@given(st.integers(1, 4), st.integers(0, 2**32))
def test_bounds_duality_and_evenness(n, seed):
    g = random_unipotent_group(n, 1, seed).automorphisms()[0]
    rep = verify_growth_bounds(g)
    assert rep["passed"]
    assert rep["h11_exponent"] % 2 == 0


def test_bound_formulas():
    assert general_bound(4, 1, 1) == 6
    assert general_bound(4, 3, 1) == 6
    assert general_bound(4, 2, 2) == 12
    assert improved_bound(4, 2) == 10


def test_degree_and_unipotence_errors():
    g = full_jordan(2).automorphisms()[0]
    with pytest.raises(BadDegree):
        growth_exponent(g, 3, 0)
    t = TorusModel.square(1)
    with pytest.raises(NotUnipotent):
        growth_exponent(TorusAutomorphism(t, -ExactMatrix.identity(2)), 1, 1)


@given(st.integers(0, 2**32))
def test_expansion_reconstructs_pullbacks(seed):
    rng = random.Random(seed)
    g = random_unipotent_group(3, 1, seed).automorphisms()[0]
    omega = random_kahler(3, rng)
    rec = expansion_classes(g, omega)
    power = omega
    for m in range(6):
        assert rec.reconstruct(m) == power
        power = pullback_hermitian(g, power)
    assert rec.top_index <= growth_exponent(g, 1, 1)


def test_expansion_requires_kahler():
    g = full_jordan(2).automorphisms()[0]
    with pytest.raises(NotKahler):
        expansion_classes(g, HermitianClass(ExactMatrix.diag([1, 0])))


def test_generic_top_index_equals_exponent_for_full_jordan():
    g = full_jordan(3).automorphisms()[0]
    assert generic_top_index(g) == 4


def test_fitted_slope_tracks_exponent():
    g = full_jordan(3).automorphisms()[0]
    assert norm_growth_sample(g, 1, 1, 0) == 1
    slope = fitted_slope(g, 1, 1, range(6, 12))
    assert round(slope) == 4
