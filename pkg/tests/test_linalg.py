import math

import numpy as np
import pytest

from sparsespectra import linalg, oracles
from sparsespectra.errors import ContractError, DomainError, ShapeError


def crandn(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


class TestHessenberg:
    def test_two_by_two_unchanged(self, rng):
        A = crandn(rng, 2)
        np.testing.assert_array_equal(linalg.hessenberg(A), A)

    def test_already_hessenberg_unchanged(self, rng):
        A = np.triu(crandn(rng, 6), -1)
        np.testing.assert_array_equal(linalg.hessenberg(A), A)

    def test_structure_and_invariants(self, rng):
        A = crandn(rng, 6)
        H = linalg.hessenberg(A)
        assert np.all(np.tril(H, -2) == 0.0)
        assert np.trace(H) == pytest.approx(np.trace(A), rel=1e-12)
        assert linalg.hs_norm(H) == pytest.approx(linalg.hs_norm(A), rel=1e-12)

    def test_non_square_rejected(self, rng):
        with pytest.raises(ShapeError):
            linalg.hessenberg(crandn(rng, 3, 4))


class TestEigenvalues:
    def test_rotation_matrix(self):
        res = linalg.eigenvalues(np.array([[0.0, -1.0], [1.0, 0.0]]))
        assert res.converged
        assert linalg.multiset_match_distance(res.eigenvalues, [1j, -1j]) < 1e-15

    def test_diagonal(self):
        res = linalg.eigenvalues(np.diag([2.0, 3.0j, -1.0]))
        assert linalg.multiset_match_distance(res.eigenvalues, [2, 3j, -1]) == 0.0

    def test_matches_characteristic_polynomial_oracle(self, rng):
        for _ in range(10):
            A = crandn(rng, 4)
            res = linalg.eigenvalues(A)
            ref = oracles.eigenvalue_oracle(A)
            assert linalg.multiset_match_distance(res.eigenvalues, ref) < 1e-7

    def test_trace_and_schur(self, rng):
        for _ in range(10):
            A = crandn(rng, 50)
            res = linalg.eigenvalues(A)
            assert res.converged
            tr = np.trace(A)
            assert abs(np.sum(res.eigenvalues) - tr) <= 1e-8 * abs(tr)
            assert np.sum(np.abs(res.eigenvalues) ** 2) <= linalg.hs_norm(A) ** 2 * (
                1 + 1e-8
            )

    def test_permutation_similarity(self, rng):
        A = crandn(rng, 12)
        perm = rng.permutation(12)
        P = np.eye(12)[perm]
        B = P @ A @ P.T
        ea = linalg.eigenvalues(A).eigenvalues
        eb = linalg.eigenvalues(B).eigenvalues
        assert linalg.multiset_match_distance(ea, eb) < 1e-7

    def test_nonfinite_rejected(self):
        A = np.array([[1.0, np.inf], [0.0, 1.0]], dtype=complex)
        with pytest.raises(DomainError):
            linalg.eigenvalues(A)

    def test_sparse_degenerate_matrix_converges(self):
        # Heavily rank-deficient input (many zero rows) still deflates.
        A = np.zeros((40, 40), dtype=complex)
        A[3, 5] = 2.0
        A[7, 7] = -1.0j
        res = linalg.eigenvalues(A)
        assert res.converged
        assert np.count_nonzero(np.abs(res.eigenvalues) > 1e-12) == 1


class TestHermitianEigen:
    def test_two_by_two_closed_form(self):
        vals = linalg.hermitian_eigen(np.array([[2.0, 1j], [-1j, 2.0]]))
        np.testing.assert_allclose(vals, [1.0, 3.0], atol=1e-12)

    def test_zero_matrix(self):
        np.testing.assert_array_equal(linalg.hermitian_eigen(np.zeros((5, 5))), 0.0)

    def test_trace_identities(self, rng):
        B = crandn(rng, 6)
        B = B + B.conj().T
        vals = linalg.hermitian_eigen(B)
        assert np.sum(vals) == pytest.approx(np.trace(B).real, abs=1e-10)
        assert np.sum(vals**2) == pytest.approx(linalg.hs_norm(B) ** 2, abs=1e-10)

    def test_non_hermitian_rejected(self, rng):
        with pytest.raises(ContractError):
            linalg.hermitian_eigen(crandn(rng, 4))


class TestSingularValues:
    def test_permutation_matrix(self):
        P = np.eye(3)[[2, 0, 1]]
        np.testing.assert_allclose(linalg.singular_values(P).values, 1.0, atol=1e-12)

    def test_diagonal(self):
        sv = linalg.singular_values(np.diag([3.0, -4.0j])).values
        np.testing.assert_allclose(sv, [4.0, 3.0], atol=1e-12)

    def test_product_matches_cofactor_det(self, rng):
        for _ in range(5):
            A = crandn(rng, 5)
            ref = abs(oracles.cofactor_det(A))
            prod = float(np.prod(linalg.singular_values(A).values))
            assert prod == pytest.approx(ref, rel=1e-8)

    def test_rectangular(self, rng):
        A = crandn(rng, 5, 3)
        sv = linalg.singular_values(A).values
        assert sv.shape == (3,)
        assert np.all(np.diff(sv) <= 0)
        svt = linalg.singular_values(A.conj().T).values
        np.testing.assert_allclose(sv, svt, atol=1e-10)

    def test_least_singular_value(self):
        assert linalg.least_singular_value(np.diag([1.0, 1e-6])) == pytest.approx(1e-6)
        dup = np.array([[1.0, 2.0], [1.0, 2.0]], dtype=complex)
        assert linalg.least_singular_value(dup) <= 1e-10 * linalg.hs_norm(dup)


class TestRowDistances:
    def test_identity(self):
        np.testing.assert_array_equal(linalg.row_distance_sequence(np.eye(3)), 1.0)

    def test_duplicate_row(self):
        d = linalg.row_distance_sequence(np.array([[1.0, 0.0], [1.0, 0.0]]))
        np.testing.assert_array_equal(d, [1.0, 0.0])

    def test_first_distance_is_row_norm(self, rng):
        A = crandn(rng, 4)
        d = linalg.row_distance_sequence(A)
        assert d[0] == pytest.approx(np.sqrt(np.sum(np.abs(A[0]) ** 2)), rel=1e-14)

    def test_product_matches_cofactor_det(self, rng):
        for _ in range(5):
            A = crandn(rng, 5)
            ref = abs(oracles.cofactor_det(A))
            prod = float(np.prod(linalg.row_distance_sequence(A)))
            assert prod == pytest.approx(ref, rel=1e-8)


class TestLogAbsDet:
    @pytest.mark.parametrize("method", list(linalg.DetMethod))
    def test_identity(self, method):
        assert linalg.log_abs_det(np.eye(4), method) == 0.0

    @pytest.mark.parametrize("method", list(linalg.DetMethod))
    def test_known_diagonal(self, method):
        val = linalg.log_abs_det(np.diag([2.0, 3.0j]), method)
        assert val == pytest.approx(math.log(6.0), abs=1e-12)

    @pytest.mark.parametrize("method", list(linalg.DetMethod))
    def test_singular_gives_minus_inf(self, method):
        A = np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
        assert linalg.log_abs_det(A, method) == -math.inf

    def test_three_way_agreement(self, rng):
        for _ in range(10):
            A = crandn(rng, 8)
            vals = [linalg.log_abs_det(A, m) for m in linalg.DetMethod]
            assert max(vals) - min(vals) < 1e-6

    def test_triple_identity_at_size_20(self, rng):
        worst = 0.0
        for _ in range(20):
            A = crandn(rng, 20)
            vals = [linalg.log_abs_det(A, m) for m in linalg.DetMethod]
            worst = max(worst, max(vals) - min(vals))
        assert worst < 1e-6


class TestHsNorm:
    def test_identity(self):
        assert linalg.hs_norm(np.eye(4)) == 2.0

    def test_all_ones(self):
        assert linalg.hs_norm(np.ones((2, 2))) == 2.0

    def test_matches_gram_trace(self, rng):
        A = crandn(rng, 6)
        ref = math.sqrt(np.trace(A.conj().T @ A).real)
        assert linalg.hs_norm(A) == pytest.approx(ref, rel=1e-12)


class TestDiracBlock:
    def test_scalar(self):
        H = linalg.dirac_block(np.array([[3.0 - 4.0j]]))
        vals = linalg.hermitian_eigen(H)
        np.testing.assert_allclose(vals, [-5.0, 5.0], atol=1e-12)

    def test_zero(self):
        np.testing.assert_array_equal(linalg.dirac_block(np.zeros((3, 3))), 0.0)

    def test_spectrum_is_pm_singular_values(self, rng):
        A = crandn(rng, 10)
        eig = linalg.hermitian_eigen(linalg.dirac_block(A))
        sv = linalg.singular_values(A / math.sqrt(10)).values
        expected = np.sort(np.concatenate([sv, -sv]))
        assert np.max(np.abs(eig - expected)) < 1e-8

    def test_spectrum_symmetry(self, rng):
        A = crandn(rng, 9)
        eig = linalg.hermitian_eigen(linalg.dirac_block(A))
        assert np.max(np.abs(eig + eig[::-1])) < 1e-9


class TestOracles:
    def test_cofactor_det_known(self):
        A = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
        assert oracles.cofactor_det(A) == pytest.approx(-2.0)
        B = np.diag([1.0 + 1j, 2.0, 3.0])
        assert oracles.cofactor_det(B) == pytest.approx((1 + 1j) * 6.0)

    def test_char_poly_of_diagonal(self):
        coeffs = oracles.char_poly_coeffs(np.diag([1.0, 2.0]))
        np.testing.assert_allclose(coeffs, [1.0, -3.0, 2.0], atol=1e-12)

    def test_poly_roots_known(self):
        # (z - 1)(z - 2)(z - 3) = z^3 - 6z^2 + 11z - 6
        roots = oracles.poly_roots([1.0, -6.0, 11.0, -6.0])
        assert linalg.multiset_match_distance(roots, [1.0, 2.0, 3.0]) < 1e-10


def test_multiset_match_distance():
    assert linalg.multiset_match_distance([1.0, 2.0], [2.0, 1.0]) == 0.0
    assert linalg.multiset_match_distance([0.0, 1.0], [0.0, 1.5]) == pytest.approx(0.5)
    with pytest.raises(ShapeError):
        linalg.multiset_match_distance([1.0], [1.0, 2.0])
