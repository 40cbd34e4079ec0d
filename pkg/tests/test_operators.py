import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gleason_lab.errors import (
    DimensionMismatch,
    DimensionOverflow,
    NonPhysicalBloch,
    NotHermitian,
    NotIdempotent,
)
from gleason_lab.operators import (
    PAULI_X,
    PAULI_Z,
    BlochVector,
    bloch_to_density,
    born_probability,
    density_to_bloch,
    haar_unitary,
    identity,
    make_density,
    make_projector,
    min_eigenvalue,
    partial_trace_b,
    partial_trace_matrix,
    random_density_matrix,
    random_unitary,
    tensor,
)

from conftest import (
    frobenius_oracle,
    kron_oracle,
    matmul_oracle,
    partial_trace_oracle,
    rank1_projector,
)

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)


class TestMakeProjector:
    def test_identity_has_full_rank(self):
        p = make_projector(identity(2))
        assert p.rank == 2
        assert p.dim == 2

    def test_computational_basis_rank_one(self):
        p = make_projector(np.diag([1.0, 0.0]).astype(complex))
        assert p.rank == 1

    def test_rejects_non_idempotent_with_residual(self):
        m = np.array([[0.5, 0.5], [0.5, 0.6]], dtype=complex)
        expected = frobenius_oracle(matmul_oracle(m, m) - m)
        with pytest.raises(NotIdempotent) as exc:
            make_projector(m)
        assert exc.value.residual == pytest.approx(expected, rel=1e-12)

    def test_rejects_non_hermitian_with_residual(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(NotHermitian) as exc:
            make_projector(m)
        assert exc.value.residual == pytest.approx(math.sqrt(2), rel=1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            make_projector(np.zeros((2, 3), dtype=complex))

    def test_random_rank_k_projectors_satisfy_invariants(self, rng):
        # rank equals the eigenvalue count near 1, checked against an
        # independent eigendecomposition.
        for _ in range(1000):
            d = int(rng.integers(2, 5))
            k = int(rng.integers(1, d + 1))
            u = haar_unitary(d, rng)
            cols = u[:, :k]
            p = make_projector(cols @ cols.conj().T)
            m = p.matrix
            assert np.linalg.norm(m @ m - m, "fro") <= 1e-10
            assert np.linalg.norm(m - m.conj().T, "fro") <= 1e-10
            eigs = np.linalg.eigvalsh(m)
            assert int(np.sum(np.abs(eigs - 1.0) <= 1e-8)) == p.rank == k
            assert np.all((np.abs(eigs) <= 1e-8) | (np.abs(eigs - 1.0) <= 1e-8))


class TestTensor:
    def test_identity_times_identity(self):
        assert np.array_equal(tensor(identity(2), identity(2)), identity(4))

    def test_basis_projector_with_identity(self):
        p0 = np.outer(KET0, KET0.conj())
        assert np.array_equal(tensor(p0, identity(2)), np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex))

    def test_matches_index_summation_oracle(self, rng):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert np.allclose(tensor(a, b), kron_oracle(a, b), atol=1e-14, rtol=0)

    def test_mixed_product_property(self, rng):
        for _ in range(20):
            a, b, c, d = (
                rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                for _ in range(4)
            )
            lhs = matmul_oracle(kron_oracle(a, b), kron_oracle(c, d))
            rhs = kron_oracle(matmul_oracle(a, c), matmul_oracle(b, d))
            assert np.allclose(tensor(a, b) @ tensor(c, d), lhs, atol=1e-12)
            assert np.allclose(lhs, rhs, atol=1e-12)

    def test_dimension_cap(self):
        with pytest.raises(DimensionOverflow):
            tensor(identity(8), identity(16))


class TestPartialTrace:
    def test_product_state_recovers_first_factor(self, rng):
        for _ in range(20):
            rho_a = random_density_matrix(2, rng)
            rho_b = random_density_matrix(3, rng)
            joint = make_density(tensor(rho_a.matrix, rho_b.matrix))
            reduced = partial_trace_b(joint, 2, 3)
            assert np.allclose(reduced.matrix, rho_a.matrix, atol=1e-12)

    def test_maximally_entangled_state_reduces_to_mixed(self):
        bell = (np.kron(KET0, KET0) + np.kron(KET1, KET1)) / math.sqrt(2)
        rho = make_density(np.outer(bell, bell.conj()))
        reduced = partial_trace_b(rho, 2, 2)
        assert np.allclose(reduced.matrix, identity(2) / 2, atol=1e-12)

    def test_matches_explicit_summation_oracle(self, rng):
        m = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        assert np.allclose(partial_trace_matrix(m, 2, 3), partial_trace_oracle(m, 2, 3), atol=0)

    def test_trace_preserving_and_positive(self, rng):
        for _ in range(50):
            rho = random_density_matrix(6, rng)
            reduced = partial_trace_b(rho, 2, 3)
            assert abs(np.trace(rho.matrix) - np.trace(reduced.matrix)) <= 1e-12
            assert np.linalg.eigvalsh(reduced.matrix)[0] >= -1e-9

    def test_embedding_trace_identity(self, rng):
        # Tr[(P x I) rho] and Tr[P Tr_B rho] computed along separate routes.
        for _ in range(100):
            p = rank1_projector(2, rng)
            rho = random_density_matrix(6, rng)
            full = np.trace(np.kron(p.matrix, identity(3)) @ rho.matrix).real
            reduced = np.trace(p.matrix @ partial_trace_b(rho, 2, 3).matrix).real
            assert abs(full - reduced) <= 1e-12

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            partial_trace_b(random_density_matrix(6, rng), 2, 2)


class TestBornProbability:
    def test_eigenstate(self):
        p = make_projector(np.outer(KET0, KET0.conj()))
        rho = make_density(np.outer(KET0, KET0.conj()))
        assert born_probability(p, rho) == pytest.approx(1.0, abs=1e-15)

    def test_maximally_mixed(self):
        p = make_projector(np.outer(KET0, KET0.conj()))
        rho = make_density(identity(2) / 2)
        assert born_probability(p, rho) == pytest.approx(0.5, abs=1e-15)

    def test_plus_state_against_explicit_trace(self):
        p = make_projector(np.outer(KET_PLUS, KET_PLUS.conj()))
        rho = make_density(np.outer(KET0, KET0.conj()))
        product = matmul_oracle(p.matrix, rho.matrix)
        expected = sum(product[i, i] for i in range(2)).real
        assert expected == pytest.approx(0.5, abs=1e-15)
        assert born_probability(p, rho) == pytest.approx(expected, abs=1e-15)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            born_probability(rank1_projector(2, rng), random_density_matrix(3, rng))

    def test_range_on_random_inputs(self, rng):
        for _ in range(100):
            value = born_probability(rank1_projector(3, rng), random_density_matrix(3, rng))
            assert 0.0 <= value <= 1.0


class TestBloch:
    def test_center_is_maximally_mixed(self):
        rho = bloch_to_density(BlochVector(0.0, 0.0, 0.0))
        assert np.allclose(rho.matrix, identity(2) / 2, atol=0)

    def test_north_pole(self):
        rho = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
        assert np.allclose(rho.matrix, np.outer(KET0, KET0.conj()), atol=0)

    def test_definite_x_and_z_is_rejected(self):
        with pytest.raises(NonPhysicalBloch) as exc:
            bloch_to_density(BlochVector(1.0, 0.0, 1.0))
        assert exc.value.norm == pytest.approx(math.sqrt(2), rel=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(
        x=st.floats(-1, 1, allow_nan=False),
        y=st.floats(-1, 1, allow_nan=False),
        z=st.floats(-1, 1, allow_nan=False),
    )
    def test_round_trip(self, x, y, z):
        assume(x * x + y * y + z * z <= 1.0)
        r = BlochVector(x, y, z)
        back = density_to_bloch(bloch_to_density(r))
        assert abs(back.x - x) <= 1e-12
        assert abs(back.y - y) <= 1e-12
        assert abs(back.z - z) <= 1e-12


class TestRandomUnitary:
    def test_unitarity(self):
        for dim, seed in ((2, 1), (3, 99), (4, 2**40)):
            u = random_unitary(dim, seed)
            assert np.linalg.norm(u.conj().T @ u - identity(dim), "fro") <= 1e-12

    def test_deterministic_for_fixed_seed(self):
        assert np.array_equal(random_unitary(4, 1234), random_unitary(4, 1234))
        assert not np.array_equal(random_unitary(4, 1234), random_unitary(4, 1235))

    def test_dim_one_is_a_phase(self):
        u = random_unitary(1, 5)
        assert u.shape == (1, 1)
        assert abs(abs(u[0, 0]) - 1.0) <= 1e-12

    def test_gram_matrix_of_columns(self):
        u = random_unitary(4, 77)
        gram = u.conj().T @ u
        off_diag = gram - np.diag(np.diag(gram))
        assert np.max(np.abs(off_diag)) <= 1e-12

    def test_rejects_dim_zero(self):
        with pytest.raises(ValueError):
            random_unitary(0, 1)


class TestMinEigenvalue:
    def test_identity(self):
        assert min_eigenvalue(identity(2)) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal(self):
        assert min_eigenvalue(np.diag([1.0, -0.25]).astype(complex)) == pytest.approx(-0.25, abs=1e-12)

    def test_definite_x_and_z_reconstruction(self):
        # Eigenvalues of (I + sigma_x + sigma_z)/2 are (1 +- sqrt(2))/2.
        m = 0.5 * (identity(2) + PAULI_X + PAULI_Z)
        expected = (1.0 - math.sqrt(2)) / 2.0
        assert min_eigenvalue(m) == pytest.approx(expected, abs=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            min_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


class TestBlochVectorType:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            BlochVector(float("nan"), 0.0, 0.0)

    def test_physicality_predicate(self):
        assert BlochVector(0.6, 0.0, 0.8).is_physical()
        assert not BlochVector(1.0, 0.0, 1.0).is_physical()


def test_validated_matrices_are_read_only(rng):
    p = rank1_projector(3, rng)
    with pytest.raises(ValueError):
        p.matrix[0, 0] = 0.0
