import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rand_orthonormal, rand_spd
from precog.errors import (
    InvalidInputError,
    NormalizationDomainError,
    NotPositiveDefiniteError,
    NumericallySingularError,
    SymmetryError,
)
from precog.learn import dL_du
from precog.matgen import ar1_autocorr
from precog.spectral import (
    cond_general,
    cond_spd,
    orthonormality_error,
    pinv,
    power_normalize,
    split_preconditioned_cond,
    sym_eig,
)


def charpoly_roots(M):
    """Independent eigenvalue oracle: Faddeev-LeVerrier coefficients + np.roots."""
    n = M.shape[0]
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    Mk = np.eye(n)
    for k in range(1, n + 1):
        Mk = M @ Mk
        coeffs[k] = -np.trace(Mk) / k
        Mk = Mk + coeffs[k] * np.eye(n)
    return np.sort(np.roots(coeffs).real)


class TestSymEig:
    def test_identity(self):
        sp = sym_eig(np.eye(3))
        assert np.allclose(sp.gamma, [1, 1, 1])
        assert np.allclose(sp.U, np.eye(3))

    def test_diagonal(self):
        sp = sym_eig(np.diag([2.0, 5.0]))
        assert np.allclose(sp.gamma, [2.0, 5.0])
        assert np.allclose(sp.U, np.eye(2))

    def test_2x2_closed_form(self):
        sp = sym_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(sp.gamma, [-1.0, 1.0])
        s = 1.0 / np.sqrt(2.0)
        # canonical sign: on a magnitude tie the first index is made positive
        assert np.allclose(sp.U[:, 0], [s, -s])
        assert np.allclose(sp.U[:, 1], [s, s])

    def test_rejects_asymmetric(self):
        with pytest.raises(SymmetryError):
            sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInputError):
            sym_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_deterministic_bits(self, rng):
        M = rand_spd(6, rng)
        a = sym_eig(M)
        b = sym_eig(M)
        assert a.U.tobytes() == b.U.tobytes()
        assert a.gamma.tobytes() == b.gamma.tobytes()

    def test_invariants_random(self, rng):
        for trial in range(100):
            n = int(rng.integers(2, 9))
            A = rng.standard_normal((n, n))
            M = (A + A.T) / 2.0
            sp = sym_eig(M)
            assert orthonormality_error(sp.U) <= 1e-10
            assert np.all(np.diff(sp.gamma) >= 0.0)
            recon = sp.U @ np.diag(sp.gamma) @ sp.U.T
            assert np.linalg.norm(recon - M) <= 1e-8 * max(np.linalg.norm(M), 1.0)
            for c in range(n):
                k = np.argmax(np.abs(sp.U[:, c]))
                assert sp.U[k, c] > 0.0

    def test_eigenvalues_match_charpoly_oracle(self, rng):
        for trial in range(40):
            n = int(rng.integers(2, 5))
            A = rng.standard_normal((n, n))
            M = (A + A.T) / 2.0
            expected = charpoly_roots(M)
            assert np.allclose(sym_eig(M).gamma, expected, atol=1e-6)

    def test_degenerate_flag(self):
        assert sym_eig(np.eye(3)).degenerate
        assert not sym_eig(np.diag([1.0, 2.0, 4.0])).degenerate


class TestCondSpd:
    def test_identity(self):
        assert cond_spd(np.eye(4)) == 1.0

    def test_diagonal(self):
        assert np.isclose(cond_spd(np.diag([1.0, 100.0])), 100.0)

    def test_not_pd(self):
        with pytest.raises(NotPositiveDefiniteError):
            cond_spd(np.diag([1.0, -1.0]))
        with pytest.raises(NotPositiveDefiniteError):
            cond_spd(np.diag([1.0, 0.0]))

    def test_ar1_power_normalized_near_asymptote(self):
        S = power_normalize(ar1_autocorr(64, 0.9)).S
        target = (1.9 / 0.1) ** 2
        assert 0.7 * target <= cond_spd(S) <= 1.3 * target


class TestCondGeneral:
    def test_orthonormal_is_one(self, rng):
        Q = rand_orthonormal(5, rng)
        assert abs(cond_general(Q) - 1.0) <= 1e-10

    def test_diagonal(self):
        assert np.isclose(cond_general(np.diag([2.0, 1.0])), 2.0)

    def test_shear_closed_form(self):
        # singular values of [[1,1],[0,1]] satisfy s^2 = (3 +- sqrt 5)/2
        expected = (3.0 + np.sqrt(5.0)) / 2.0
        assert np.isclose(cond_general(np.array([[1.0, 1.0], [0.0, 1.0]])), expected)

    def test_singular(self):
        with pytest.raises(NumericallySingularError):
            cond_general(np.array([[1.0, 1.0], [1.0, 1.0]]))


class TestPowerNormalize:
    def test_diagonal_becomes_identity(self):
        out = power_normalize(np.diag([4.0, 9.0, 0.25]))
        assert np.allclose(out.S, np.eye(3), atol=1e-15)
        assert np.array_equal(out.delta, [4.0, 9.0, 0.25])

    def test_unit_diagonal_unchanged(self):
        R = ar1_autocorr(8, 0.6)
        assert np.allclose(power_normalize(R).S, R, atol=1e-15)

    def test_2x2(self):
        out = power_normalize(np.array([[4.0, 1.0], [1.0, 1.0]]))
        assert np.allclose(out.S, [[1.0, 0.5], [0.5, 1.0]])

    def test_nonpositive_diagonal(self):
        with pytest.raises(NormalizationDomainError):
            power_normalize(np.diag([1.0, 0.0]))
        with pytest.raises(NormalizationDomainError):
            power_normalize(np.diag([1.0, -2.0]))

    @given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=40)
    def test_unit_diagonal_invariant(self, n, seed):
        R = rand_spd(n, np.random.default_rng(seed))
        out = power_normalize(R)
        assert np.max(np.abs(np.diag(out.S) - 1.0)) <= 1e-12
        assert np.max(np.abs(out.S - out.S.T)) <= 1e-12


class TestSplitPreconditionedCond:
    def test_identity_transform(self, rng):
        R = rand_spd(6, rng)
        assert np.isclose(
            split_preconditioned_cond(R, np.eye(6)), cond_spd(power_normalize(R).S)
        )

    def test_identity_matrix_any_u(self, rng):
        U = rand_orthonormal(7, rng)
        assert np.isclose(split_preconditioned_cond(np.eye(7), U), 1.0)

    def test_non_orthonormal_rejected(self, rng):
        with pytest.raises(InvalidInputError):
            split_preconditioned_cond(np.eye(3), 2.0 * np.eye(3))

    def test_invariant_under_signed_permutations(self, rng):
        R = rand_spd(6, rng)
        U = rand_orthonormal(6, rng)
        ref = split_preconditioned_cond(R, U)
        for trial in range(20):
            perm = rng.permutation(6)
            signs = rng.choice([-1.0, 1.0], size=6)
            V = U[:, perm] * signs
            assert abs(split_preconditioned_cond(R, V) - ref) <= 1e-9 * ref


class TestPinv:
    def test_invertible(self, rng):
        M = rand_spd(5, rng)
        assert np.linalg.norm(pinv(M) - np.linalg.inv(M)) <= 1e-10

    def test_zero_matrix(self):
        Z = np.zeros((3, 4))
        assert np.array_equal(pinv(Z), np.zeros((4, 3)))

    def test_rank_one_closed_form(self, rng):
        a = rng.standard_normal(5)
        b = rng.standard_normal(4)
        M = np.outer(a, b)
        expected = np.outer(b, a) / ((a @ a) * (b @ b))
        assert np.allclose(pinv(M), expected, atol=1e-12)

    def _penrose(self, M, P):
        ok = np.allclose(M @ P @ M, M, atol=1e-8 * max(1.0, np.linalg.norm(M)))
        ok &= np.allclose(P @ M @ P, P, atol=1e-8 * max(1.0, np.linalg.norm(P)))
        ok &= np.allclose(M @ P, (M @ P).T, atol=1e-8 * max(1.0, np.linalg.norm(M @ P)))
        ok &= np.allclose(P @ M, (P @ M).T, atol=1e-8 * max(1.0, np.linalg.norm(P @ M)))
        return ok

    def test_penrose_identities_random(self, rng):
        for trial in range(20):
            M = rng.standard_normal((4, 6))
            assert self._penrose(M, pinv(M))

    def test_penrose_on_eigvec_sensitivity_matrices(self, rng):
        # the singular rank <= 2 matrices that the learning chain inverts
        sp = sym_eig(rand_spd(5, rng))
        for k in range(5):
            for l in range(5):
                M = dL_du(sp, k, l)
                assert self._penrose(M, pinv(M))
