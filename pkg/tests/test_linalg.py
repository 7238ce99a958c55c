import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensordrazin import linalg
from tensordrazin.modified.generate import random_tensor


def _rand(seed, r, c, density=1.0):
    return random_tensor(random.Random(seed), (r,), (c,), density=density).matrix


def test_rref_and_rank():
    M = np.array([[Fraction(x) for x in row] for row in [[1, 2, 3], [2, 4, 6], [1, 0, 1]]], dtype=object)
    R, piv = linalg.rref(M)
    assert piv == (0, 1)
    assert linalg.rank(M).rank == 2


def test_inverse_exact():
    M = _rand(1, 4, 4)
    while linalg.rank(M).rank < 4:
        M = M + linalg.eye_like(4, M)
    assert np.array_equal(M @ linalg.inverse(M), linalg.eye_like(4, M))


def test_singular_inverse_reports_rank():
    M = np.array([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], dtype=object)
    with pytest.raises(linalg.SingularMatrixError) as err:
        linalg.inverse(M)
    assert err.value.rank == 1


def test_solve():
    M = np.array([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]], dtype=object)
    x = linalg.solve(M, np.array([Fraction(3), Fraction(5)], dtype=object))
    assert list(x) == [Fraction(4, 5), Fraction(7, 5)]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 5), st.integers(1, 5), st.floats(0.2, 1.0))
def test_penrose_equations_exact(seed, r, c, density):
    M = _rand(seed, r, c, density)
    X = linalg.pseudoinverse(M)
    assert np.array_equal(M @ X @ M, M)
    assert np.array_equal(X @ M @ X, X)
    assert np.array_equal((M @ X).T, M @ X)
    assert np.array_equal((X @ M).T, X @ M)


def test_full_rank_factorization():
    M = _rand(7, 4, 5, 0.5)
    F, G = linalg.full_rank_factorization(M)
    assert np.array_equal(F @ G, M)
    assert F.shape[1] == G.shape[0] == linalg.rank(M).rank


def test_float_pseudoinverse_matches_numpy():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 4))
    assert linalg.rank(M).rank == 3
    assert np.allclose(linalg.pseudoinverse(M), np.linalg.pinv(M), atol=1e-10)


def test_zero_matrix_pseudoinverse():
    Z = np.zeros((2, 3))
    assert linalg.pseudoinverse(Z).shape == (3, 2)
