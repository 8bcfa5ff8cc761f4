from math import ceil, log2

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitorus.errors import BadParameters, MalformedWord, NotUnipotent
from unitorus.gallery import random_unipotent_group, subtorus_translation_case, u_k_generators
from unitorus.groups import (
    AffineGroupPresentation,
    AffineMap,
    MatrixGroupPresentation,
    affine_lcs_oracle,
    affine_nilpotency_class,
    affine_to_unipotent,
    annihilation_check,
    decompose,
    derived_length,
    evaluate_decomposition,
    evaluate_word,
    flag_abelian_check,
    gamma_decomposition_check,
    lcs_oracle,
    lie_closure,
    log2_bound,
    nilpotency_class,
    verify_affine_embedding,
    word_weight,
)
from unitorus.linalg import ExactMatrix


def u_group(n):
    return MatrixGroupPresentation(u_k_generators(n), n)


@pytest.mark.parametrize("n", range(2, 7))
def test_u_n_class(n):
    g = u_group(n)
    assert nilpotency_class(g) == n - 1
    assert lcs_oracle(g, n) and not lcs_oracle(g, n - 1)


@pytest.mark.parametrize("n", range(2, 9))
def test_u_n_derived_length(n):
    assert derived_length(u_group(n)) == ceil(log2(n))


def test_lie_closure_of_u3_is_heisenberg():
    alg = lie_closure(u_group(3))
    assert alg.dim == 3 and alg.is_closed()
    assert alg.lower_central_series() == [3, 1, 0]
    assert alg.derived_series() == [3, 1, 0]


def test_trivial_group():
    g = MatrixGroupPresentation([ExactMatrix.identity(3)], 3)
    assert nilpotency_class(g) == 0
    assert derived_length(g) == 0
    assert lcs_oracle(g, 1)


@given(st.integers(1, 20))
def test_log2_bound(c):
    assert log2_bound(c) == int(log2(c)) + 1


def test_presentation_validation():
    with pytest.raises(BadParameters):
        MatrixGroupPresentation([ExactMatrix([[2, 0], [0, 1]])])
    with pytest.raises(BadParameters):
        MatrixGroupPresentation([ExactMatrix([[1, 0]])])
    with pytest.raises(NotUnipotent):
        MatrixGroupPresentation([-ExactMatrix.identity(2)]).require_unipotent()


@given(st.integers(2, 4), st.integers(0, 2**32))
def test_fuzzed_class_bounds(n, seed):
    case = random_unipotent_group(n, 2, seed)
    h1 = case.h1_group()
    c = nilpotency_class(h1)
    assert c <= n - 1
    assert lcs_oracle(h1, c + 1)
    assert c == 0 or not lcs_oracle(h1, c)
    assert derived_length(h1) <= (log2_bound(c) if c else 0)


def test_word_parsing():
    assert word_weight(((0, 1), 2)) == 3
    with pytest.raises(MalformedWord):
        word_weight((0, 1, 2))
    with pytest.raises(MalformedWord):
        word_weight(True)
    with pytest.raises(MalformedWord):
        evaluate_word(u_group(3), 5)


@pytest.mark.parametrize("word", [(0, 1), ((0, 1), 2), ((0, 1), (1, 2)), (((0, 1), 1), 0)])
def test_commutator_decomposition_is_exact(word):
    g = u_group(4)
    level = word_weight(word) - 1
    assert gamma_decomposition_check(g, word, level)
    terms = decompose(g, word)
    assert evaluate_decomposition(terms, 4) == g.identity() - evaluate_word(g, word)


def test_decomposition_rejects_low_weight():
    with pytest.raises(MalformedWord):
        gamma_decomposition_check(u_group(3), (0, 1), 2)


@given(st.integers(1, 4), st.integers(0, 2**32))
def test_annihilation_with_n_factors(n, seed):
    case = random_unipotent_group(n, 3, seed)
    auts = case.automorphisms()
    import random

    rng = random.Random(seed)
    hs = [rng.choice(auts) for _ in range(n)]
    gs = [rng.choice(auts) for _ in range(n)]
    assert annihilation_check(hs, gs).is_zero()


def test_annihilation_witness_with_fewer_factors():
    from unitorus.gallery import full_jordan

    for n in (2, 3, 4):
        g = full_jordan(n).automorphisms()[0]
        ident = ExactMatrix.identity(2 * n)
        assert not annihilation_check([ident] * (n - 1), [g] * (n - 1)).is_zero()


def test_flag_abelian():
    a = ExactMatrix([[1, 0, 1], [0, 1, 2], [0, 0, 1]])
    b = ExactMatrix([[1, 0, 3], [0, 1, -1], [0, 0, 1]])
    assert flag_abelian_check([a, b], [[1, 0, 0], [0, 1, 0]])
    c = ExactMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    assert not flag_abelian_check([c], [[1, 0, 0], [0, 1, 0]])


def test_affine_maps():
    f = AffineMap(ExactMatrix([[1, 1], [0, 1]]), [1, 0])
    assert (f @ f.inverse()).is_identity()
    assert (f @ f).block() == f.block() @ f.block()
    t = AffineMap(ExactMatrix.identity(1), ["2/3"], torus=True)
    assert not (t @ t).is_identity()
    assert (t @ t @ t).is_identity()


@pytest.mark.parametrize("k", range(1, 6))
def test_affine_class_matches_u_k_plus_1(k):
    gens = [(g, [0] * k) for g in u_k_generators(k)]
    gens += [(ExactMatrix.identity(k), [int(i == j) for i in range(k)]) for j in range(k)]
    group = AffineGroupPresentation(k, gens)
    assert verify_affine_embedding(group)
    assert affine_nilpotency_class(group) == k == nilpotency_class(u_group(k + 1))
    assert affine_lcs_oracle(group, k + 1) and not affine_lcs_oracle(group, k)


def test_affine_embedding_needs_integer_translation():
    group = AffineGroupPresentation(1, [(ExactMatrix.identity(1), ["1/2"])])
    with pytest.raises(BadParameters):
        affine_to_unipotent(group)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_subtorus_translations(n):
    assert affine_lcs_oracle(subtorus_translation_case(n).group, n)
    assert not affine_lcs_oracle(subtorus_translation_case(n, full=True).group, n)
