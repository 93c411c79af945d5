import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiedlerkron.core import (BlockPencil, BlockPermutation, MatrixPolynomial, block_permutation_matrix,
                              block_sip, block_transpose, dump_json, integer_fixture, matrices_equal,
                              matrix_from_json, matrix_to_json)


def test_matrices_equal_exact_and_relative():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert matrices_equal(a, a.copy())
    assert not matrices_equal(a, a + 1e-15)
    assert matrices_equal(a, a + 1e-15, 1e-12)
    assert not matrices_equal(a, np.ones((2, 3)))


def test_polynomial_evaluation_matches_power_sum():
    P = integer_fixture(4, 3)
    lam = 0.5 - 1.5j
    direct = sum(A * lam**i for i, A in enumerate(P.coeffs))
    assert np.allclose(P(lam), direct, rtol=1e-14)


def test_polynomial_reversal_and_degree():
    A = np.eye(2)
    P = MatrixPolynomial((A, 2 * A, np.zeros((2, 2))))
    assert P.grade == 2 and P.degree == 1
    R = P.reversal(3)
    assert R.grade == 3
    assert matrices_equal(R[3], A) and matrices_equal(R[2], 2 * A) and not R[0].any()
    with pytest.raises(ValueError):
        P.reversal(0)


def test_polynomial_rejects_mismatched_shapes():
    with pytest.raises(ValueError):
        MatrixPolynomial((np.eye(2), np.eye(3)))


def test_rectangular_polynomial_transpose():
    rng = np.random.default_rng(3)
    P = MatrixPolynomial.random(2, 2, rng, m=3)
    assert (P.n, P.m) == (2, 3)
    assert (P.transpose().n, P.transpose().m) == (3, 2)


def test_polynomial_json_roundtrip_real_and_complex():
    rng = np.random.default_rng(0)
    for P in (integer_fixture(3, 2), MatrixPolynomial.random(2, 3, rng)):
        Q = MatrixPolynomial.from_json(json.loads(json.dumps(P.to_json())))
        assert Q.equals(P)


def test_polynomial_json_header_mismatch():
    data = integer_fixture(2, 2).to_json()
    data["grade"] = 5
    with pytest.raises(ValueError):
        MatrixPolynomial.from_json(data)


def test_pencil_blocks_and_transpose():
    n = 2
    B1 = np.arange(36.0).reshape(6, 6)
    L = BlockPencil(B1, -B1, n)
    assert L.shape == (3, 3)
    b1, b0 = L.block(1, 2)
    assert np.array_equal(b1, B1[2:4, 4:6]) and np.array_equal(b0, -B1[2:4, 4:6])
    T = L.block_transpose()
    assert np.array_equal(T.block(2, 1)[0], b1)
    assert T.block_transpose().equals(L)
    sub = L.blocks([2, 0], [1])
    assert sub.shape == (2, 1)
    assert np.array_equal(sub.block(0, 0)[0], L.block(2, 1)[0])


def test_pencil_rejects_ragged_grid():
    with pytest.raises(ValueError):
        BlockPencil(np.zeros((3, 4)), np.zeros((3, 4)), 2)


def test_pencil_json_roundtrip():
    L = BlockPencil(np.arange(16.0).reshape(4, 4), np.eye(4), 2)
    assert BlockPencil.from_json(json.loads(dump_json(L.to_json()))).equals(L)


def test_pencil_algebra():
    rng = np.random.default_rng(1)
    L = BlockPencil(rng.standard_normal((4, 4)), rng.standard_normal((4, 4)), 2)
    lam = 0.3
    assert np.allclose((L + L)(lam), 2 * L(lam))
    assert np.allclose((L - L)(lam), 0)
    assert np.allclose((-L)(lam), -L(lam))
    assert L.reversal().equals(BlockPencil(L.B0, L.B1, 2))
    assert L.as_polynomial().equals(MatrixPolynomial((L.B0, L.B1)))


def test_block_permutation_places_identity_at_c_i_i():
    c = BlockPermutation((2, 3, 1), 2)
    M = c.matrix()
    assert np.array_equal(M, block_permutation_matrix(c))
    assert np.array_equal(M[2:4, 0:2], np.eye(2))
    assert np.array_equal(M[4:6, 2:4], np.eye(2))
    assert np.array_equal(M[0:2, 4:6], np.eye(2))


@given(st.permutations(range(1, 6)), st.permutations(range(1, 6)))
def test_block_permutation_compose_and_inverse(a, b):
    A, B = BlockPermutation(tuple(a), 2), BlockPermutation(tuple(b), 2)
    assert np.array_equal(A.compose(B).matrix(), A.matrix() @ B.matrix())
    assert np.array_equal(A.compose(A.inverse()).matrix(), np.eye(10))


def test_block_permutation_rejects_non_permutation():
    with pytest.raises(ValueError):
        BlockPermutation((1, 1, 3), 2)


def test_block_sip_is_involution():
    R = block_sip(4, 3)
    assert np.array_equal(R @ R, np.eye(12))
    assert np.array_equal(R[0:3, 9:12], np.eye(3))


@settings(max_examples=50)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 3))
def test_block_transpose_is_involution(r, c, n):
    M = np.arange(r * c * n * n, dtype=float).reshape(r * n, c * n)
    T = block_transpose(M, n)
    assert T.shape == (c * n, r * n)
    assert np.array_equal(block_transpose(T, n), M)
    if r > 1:
        assert np.array_equal(T[:n, n:2 * n], M[n:2 * n, :n])


def test_block_transpose_product_law():
    n = 2
    rng = np.random.default_rng(5)
    A = rng.integers(-3, 4, size=(6, 4)).astype(float)
    # Block transpose reverses products when one factor is a Kronecker product with I_n.
    K = np.kron(rng.integers(-3, 4, size=(2, 3)).astype(float), np.eye(n))
    assert np.array_equal(block_transpose(A @ K, n), block_transpose(K, n) @ block_transpose(A, n))


def test_matrix_json_complex():
    M = np.array([[1 + 2j, 0], [3, -1j]])
    assert np.array_equal(matrix_from_json(matrix_to_json(M)), M)


def test_integer_fixture_is_deterministic_and_nonsingular():
    P, Q = integer_fixture(5, 2), integer_fixture(5, 2)
    assert P.equals(Q)
    assert all(abs(np.linalg.det(A)) >= 0.5 for A in P.coeffs)
    assert all(np.array_equal(A, np.round(A)) for A in P.coeffs)
