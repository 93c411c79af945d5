import numpy as np
import pytest

from fiedlerkron.core import BlockPencil, MatrixPolynomial, integer_fixture
from fiedlerkron.kronecker import L_pencil, Lambda, fiedler_ebk, gfp_ebk, recognize_ebk
from fiedlerkron.pencils import fiedler, gfp
from fiedlerkron.verify import (SingularPolynomialError, canonical_sort, companion, eig_condition, is_regular,
                                match_spectra, minimal_index_shift_check, minimal_indices_oracle, normal_rank,
                                pencil_eigs, polyeig_reference, strong_linearization_check)


def rank_one(u, v, k):
    """``u(l) v(l)^T`` from coefficient lists of vectors, at grade ``k``."""
    n = len(u[0])
    C = [np.zeros((n, n)) for _ in range(k + 1)]
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            C[i + j] = C[i + j] + np.outer(a, b)
    return MatrixPolynomial(tuple(C))


def e(i, n=2):
    x = np.zeros(n)
    x[i] = 1.0
    return x


def test_canonical_sort_orders_by_real_then_imag():
    z = canonical_sort([1 + 1j, -1, 1 - 1j, 0.5])
    assert list(z) == [-1, 0.5, 1 - 1j, 1 + 1j]


def test_pencil_eigs_finite_and_infinite():
    L = BlockPencil(np.diag([1.0, 0.0]), np.diag([-2.0, 1.0]), 1)
    rep = pencil_eigs(L)
    assert rep.inf_count == 1
    assert np.allclose(rep.finite, [2.0])
    with pytest.raises(ValueError):
        pencil_eigs(BlockPencil(np.zeros((2, 4)), np.zeros((2, 4)), 2))


def test_companion_eigenvalues_match_scalar_roots():
    # 2 l^3 - 3 l^2 - 11 l + 6 = (l - 3)(2 l - 1)(l + 2)
    P = MatrixPolynomial(tuple(np.array([[c]]) for c in (6.0, -11.0, -3.0, 2.0)))
    rep = polyeig_reference(P)
    assert np.allclose(rep.finite, [-2.0, 0.5, 3.0])
    assert rep.inf_count == 0
    assert companion(P).B1.shape == (3, 3)


def test_singular_leading_coefficient_gives_infinite_eigenvalues():
    P = MatrixPolynomial((np.eye(2), np.diag([1.0, 2.0]), np.diag([1.0, 0.0])))
    assert polyeig_reference(P).inf_count == 1


def test_singular_polynomial_rejected():
    P = MatrixPolynomial((np.diag([1.0, 0.0]), np.diag([2.0, 0.0])))
    assert not is_regular(P)
    with pytest.raises(SingularPolynomialError):
        polyeig_reference(P)


def test_match_spectra_handles_near_ties():
    # Real parts straddle a rounding boundary, so plain sorting pairs the wrong eigenvalues.
    ref = np.array([0.2e-10 + 1j, 0.50001e-10 - 1j, 2.0])
    got = np.array([0.2e-10 + 1j, 0.49999e-10 - 1j, 2.0])
    assert np.max(np.abs(canonical_sort(got) - canonical_sort(ref))) > 1
    err, _ = match_spectra(got, ref)
    assert err < 1e-12
    assert match_spectra(np.array([1.0]), ref)[0] == np.inf


def test_strong_linearization_check_pass_and_fail():
    rng = np.random.default_rng(4)
    P = MatrixPolynomial.random(2, 4, rng)
    L = fiedler(P, (0, 2, 1, 3))
    rep = strong_linearization_check(L, P)
    assert rep.passed and rep.max_rel_error < 1e-10 and rep.rev_max_rel_error < 1e-10
    assert rep.to_json()["status"] == "pass"
    wrong = BlockPencil(L.B1, L.B0 + 1e-3 * np.eye(8), 2)
    bad = strong_linearization_check(wrong, P)
    assert bad.status == "fail" and bad.messages
    assert strong_linearization_check(L, P, eligible=False).status == "ineligible"
    with pytest.raises(ValueError):
        strong_linearization_check(L, MatrixPolynomial.random(2, 3, rng))


def test_eig_condition_is_finite_for_generic_pencil():
    rng = np.random.default_rng(0)
    P = MatrixPolynomial.random(2, 3, rng)
    assert 1.0 <= eig_condition(fiedler(P, (0, 1, 2))) < 1e8


def test_normal_rank():
    assert normal_rank(integer_fixture(3, 2)) == 2
    assert normal_rank(rank_one([e(0), e(1)], [e(0)], 2)) == 1


@pytest.mark.parametrize("u,v,right,left", [
    ([e(0), e(1)], [e(0), e(1)], (1,), (1,)),
    ([e(0)], [e(0), e(1)], (1,), (0,)),
    ([e(0), e(1)], [e(0), 0 * e(0), e(1)], (2,), (1,)),
    ([e(1)], [e(0)], (0,), (0,)),
])
def test_minimal_indices_of_rank_one(u, v, right, left):
    P = rank_one(u, v, 4)
    rep = minimal_indices_oracle(P, 6)
    assert (rep.right, rep.left) == (right, left)


def test_minimal_indices_of_dual_pencil():
    rep = minimal_indices_oracle(L_pencil(2, 1).as_polynomial(), 4)
    assert rep.right == (2,) and rep.left == ()


def test_minimal_indices_regular_and_zero():
    assert minimal_indices_oracle(integer_fixture(2, 2), 3) == minimal_indices_oracle(integer_fixture(2, 2), 3)
    rep = minimal_indices_oracle(integer_fixture(2, 2), 3)
    assert rep.right == () and rep.left == ()
    Z = MatrixPolynomial((np.zeros((2, 2)), np.zeros((2, 2))))
    assert minimal_indices_oracle(Z, 2).right == (0, 0)


def test_d_max_too_small():
    P = rank_one([e(0)], [e(0), 0 * e(0), 0 * e(0), e(1)], 4)
    with pytest.raises(ValueError):
        minimal_indices_oracle(P, 1)


def test_shift_check_on_fiedler_and_gfp():
    P = rank_one([e(0), e(1)], [e(0), 0 * e(0), e(1)], 4)
    for view in (fiedler_ebk(P, (0, 2, 1, 3)), fiedler_ebk(P, (3, 2, 1, 0)), gfp_ebk(P, (2, 0), (-1, -4, -3))):
        ok, info = minimal_index_shift_check(view, P, 6)
        assert ok, info
