from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import int_matrices, leibniz_det, naive_rank, rational_matrices
from unitorus.errors import NotQuasiUnipotent, NotSymmetric
from unitorus.linalg import (
    ExactMatrix,
    Subspace,
    charpoly,
    cyclotomic,
    hermitian_inertia,
    inertia,
    is_unipotent,
    jordan_profile_unipotent,
    kernel_subspace,
    nilpotency_index,
    nilpotent_exp,
    quasi_unipotent_order,
    rank_sequence,
    unipotent_log,
)
from unitorus.scalars import I, GaussianRational


def jordan_block(n):
    return ExactMatrix([[int(a == b or b == a + 1) for b in range(n)] for a in range(n)])


@given(rational_matrices(3))
def test_det_matches_leibniz(rows):
    assert ExactMatrix(rows).det() == leibniz_det(rows)


@given(int_matrices(4))
def test_integer_det_matches_leibniz(rows):
    assert ExactMatrix(rows).det() == leibniz_det(rows)


@given(st.integers(1, 4).flatmap(lambda r: int_matrices(r, 5, -2, 2)))
def test_rank_matches_naive(rows):
    assert ExactMatrix(rows).rank() == naive_rank(rows)


@given(rational_matrices(3))
def test_inverse_roundtrip(rows):
    m = ExactMatrix(rows)
    if m.det() == 0:
        return
    assert m @ m.inverse() == ExactMatrix.identity(3)
    assert m.inverse() @ m == ExactMatrix.identity(3)


@given(int_matrices(3, 5, -3, 3))
def test_nullspace_is_kernel(rows):
    m = ExactMatrix(rows)
    kern = m.nullspace()
    assert len(kern) == 5 - m.rank()
    for v in kern:
        assert (m @ ExactMatrix.from_columns([v])).is_zero()


@given(int_matrices(3, 4))
def test_rref_is_reduced_and_row_equivalent(rows):
    m = ExactMatrix(rows)
    pivots, red = m.rref()
    assert len(pivots) == m.rank()
    for k, p in enumerate(pivots):
        assert red[k, p] == 1
        assert all(red[i, p] == 0 for i in range(red.rows) if i != k)
    assert m.vstack(red).rank() == m.rank()


@given(rational_matrices(3), rational_matrices(3), rational_matrices(3))
def test_product_is_associative_and_distributive(a, b, c):
    A, B, C = ExactMatrix(a), ExactMatrix(b), ExactMatrix(c)
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ (B + C) == A @ B + A @ C
    assert (A @ B).T == B.T @ A.T


def test_gaussian_entries():
    m = ExactMatrix([[1, I], [-I, 2]])
    assert not m.is_real()
    assert m.H == m
    assert m.det() == 1
    assert m @ m.inverse() == ExactMatrix.identity(2)
    assert ExactMatrix([[1, I], [I, -1]]).rank() == 1


def test_kron_shape_and_values():
    a = ExactMatrix([[1, 2], [3, 4]])
    k = a.kron(ExactMatrix.identity(2))
    assert k.shape == (4, 4)
    assert k[2, 0] == 3 and k[3, 1] == 3 and k[2, 1] == 0


def test_subspace_algebra():
    s = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    t = Subspace.span([[0, 1, 1]], 3)
    assert s.dim == 2 and (s + t).dim == 3
    assert s.intersect(t).dim == 0
    assert Subspace.span([[0, 1, 0]], 3) <= s
    assert not t <= s
    assert s.contains([Fraction(1, 2), 3, 0])
    assert kernel_subspace(ExactMatrix([[1, 1, 1]])).dim == 2


@given(st.integers(1, 6))
def test_jordan_block_invariants(n):
    J = jordan_block(n)
    assert is_unipotent(J)
    assert nilpotency_index(J - ExactMatrix.identity(n)) == n
    assert tuple(jordan_profile_unipotent(J)) == (n,)
    assert list(rank_sequence(J - ExactMatrix.identity(n)))[:2] == [n, n - 1]


@given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_log_exp_roundtrip(vals):
    # strictly upper triangular entries of a 4x4 matrix
    rows = [[0] * 4 for _ in range(4)]
    k = 0
    for i in range(4):
        for j in range(i + 1, 4):
            rows[i][j] = vals[k]
            k += 1
    u = ExactMatrix.identity(4) + ExactMatrix(rows)
    assert nilpotent_exp(unipotent_log(u)) == u


def test_jordan_profile_mixed_blocks():
    m = ExactMatrix.block_diag(jordan_block(3), jordan_block(1), jordan_block(2))
    assert tuple(jordan_profile_unipotent(m)) == (3, 2, 1)


@given(int_matrices(3))
def test_cayley_hamilton(rows):
    m = ExactMatrix(rows)
    poly = charpoly(m)
    acc = ExactMatrix.zeros(3)
    power = ExactMatrix.identity(3)
    for c in poly:
        acc = acc + power.scale(c)
        power = power @ m
    assert acc.is_zero()
    assert poly[0] == (-1) ** 3 * m.det()


def test_cyclotomic_polynomials():
    assert cyclotomic(1) == [-1, 1]
    assert cyclotomic(4) == [1, 0, 1]
    assert cyclotomic(6) == [1, -1, 1]


def test_quasi_unipotent_orders():
    assert quasi_unipotent_order(ExactMatrix([[0, -1], [1, -1]])) == 3
    assert quasi_unipotent_order(-ExactMatrix.identity(2)) == 2
    assert quasi_unipotent_order(ExactMatrix([[0, -1], [1, 0]])) == 4
    assert quasi_unipotent_order(jordan_block(3)) == 1
    assert quasi_unipotent_order(-jordan_block(3)) == 2
    with pytest.raises(NotQuasiUnipotent):
        quasi_unipotent_order(ExactMatrix([[2, 1], [1, 1]]))


@given(int_matrices(4, 4, -3, 3), st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_inertia_is_congruence_invariant(rows, diag):
    d = ExactMatrix.diag(diag)
    p = ExactMatrix(rows)
    expected = (sum(x > 0 for x in diag), sum(x == 0 for x in diag), sum(x < 0 for x in diag))
    assert inertia(d) == expected
    if p.det() != 0:
        assert inertia(p.T @ d @ p) == expected


def test_inertia_needs_two_by_two_pivots():
    assert inertia(ExactMatrix([[0, 1], [1, 0]])) == (1, 0, 1)
    assert inertia(ExactMatrix([[0, 0, 1], [0, 0, 0], [1, 0, 0]])) == (1, 1, 1)


def test_inertia_rejects_nonsymmetric():
    with pytest.raises(NotSymmetric):
        inertia(ExactMatrix([[0, 1], [0, 0]]))


def test_hermitian_inertia():
    h = ExactMatrix([[2, I], [-I, 2]])
    assert hermitian_inertia(h) == (2, 0, 0)
    assert hermitian_inertia(ExactMatrix([[1, 1], [1, 1]])) == (1, 1, 0)
    assert hermitian_inertia(ExactMatrix([[GaussianRational(0), I], [-I, 0]])) == (1, 0, 1)
