import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdcprobe.errors import DimensionMismatch, NonFinite, NotDensityMatrix, NotHermitian
from spdcprobe.linalg import (
    DensityMatrix,
    concurrence_two_qubit,
    hermitian_eigenvalues,
    jacobi_eigh,
    purity,
    trace_distance,
)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def family_state(alpha, gamma):
    psi = np.array([math.cos(alpha), 0, 0, math.sin(alpha)])
    mix = np.diag([math.cos(alpha) ** 2, 0, 0, math.sin(alpha) ** 2])
    return DensityMatrix(gamma * np.outer(psi, psi) + (1 - gamma) * mix)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestEigenvalues:
    def test_identity(self):
        np.testing.assert_array_equal(hermitian_eigenvalues(np.eye(4)), [1, 1, 1, 1])

    def test_diagonal(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.diag([0.7, 0.3])), [0.3, 0.7], atol=1e-15)

    def test_pauli_x(self):
        np.testing.assert_allclose(hermitian_eigenvalues([[0, 1], [1, 0]]), [-1, 1], atol=1e-15)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eigenvalues([[0, 1], [0, 0]])

    def test_non_finite(self):
        with pytest.raises(NonFinite):
            hermitian_eigenvalues([[np.nan, 0], [0, 1]])

    @settings(max_examples=60, deadline=None)
    @given(seeds, st.integers(1, 8))
    def test_matches_lapack_and_reconstructs(self, seed, dim):
        rng = np.random.default_rng(seed)
        z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = z + z.conj().T
        w, v = jacobi_eigh(h)
        np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-10)
        np.testing.assert_allclose((v * w) @ v.conj().T, h, atol=1e-10)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=1e-12)
        assert abs(w.sum() - np.trace(h).real) < 1e-10

    def test_dim_16(self):
        rng = np.random.default_rng(7)
        h = random_density(rng, 16).matrix
        np.testing.assert_allclose(hermitian_eigenvalues(h), np.linalg.eigvalsh(h), atol=1e-12)


class TestDensityMatrix:
    def test_rejects_bad_trace(self):
        with pytest.raises(NotDensityMatrix):
            DensityMatrix(np.diag([0.5, 0.6]))

    def test_rejects_negative(self):
        with pytest.raises(NotDensityMatrix):
            DensityMatrix(np.diag([1.1, -0.1]))

    def test_clamps_tiny_negative(self):
        rho = DensityMatrix(np.diag([1.0 + 5e-11, -5e-11]))
        assert rho.matrix[1, 1].real == 0.0
        assert abs(np.trace(rho.matrix).real - 1.0) < 1e-15

    def test_immutable(self):
        rho = DensityMatrix(np.eye(2) / 2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0


class TestTraceDistance:
    def test_same(self):
        rho = random_density(np.random.default_rng(1), 4)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal(self):
        hh = DensityMatrix(np.diag([1.0, 0, 0, 0]))
        vv = DensityMatrix(np.diag([0, 0, 0, 1.0]))
        assert trace_distance(hh, vv) == pytest.approx(1.0, abs=1e-15)

    def test_homogeneity(self):
        rng = np.random.default_rng(2)
        rho, sigma = random_density(rng, 4), random_density(rng, 4)
        mid = DensityMatrix((rho.matrix + sigma.matrix) / 2)
        assert trace_distance(rho, mid) == pytest.approx(0.5 * trace_distance(rho, sigma), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            trace_distance(DensityMatrix(np.eye(2) / 2), DensityMatrix(np.eye(4) / 4))

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.sampled_from([2, 3, 4]))
    def test_metric_axioms(self, seed, dim):
        rng = np.random.default_rng(seed)
        a, b, c = (random_density(rng, dim, rank=int(rng.integers(1, dim + 1))) for _ in range(3))
        dab = trace_distance(a, b)
        assert dab == pytest.approx(trace_distance(b, a), abs=1e-12)
        assert 0.0 <= dab <= 1.0
        assert dab <= trace_distance(a, c) + trace_distance(c, b) + 1e-12
        eig = hermitian_eigenvalues(a.matrix - b.matrix)
        assert abs(eig.sum()) < 1e-10

    @settings(max_examples=50, deadline=None)
    @given(seeds)
    def test_unitary_invariance(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_density(rng, 4), random_density(rng, 4)
        u = random_unitary(rng, 4)
        ua = DensityMatrix(u @ a.matrix @ u.conj().T)
        ub = DensityMatrix(u @ b.matrix @ u.conj().T)
        assert trace_distance(ua, ub) == pytest.approx(trace_distance(a, b), abs=1e-10)


class TestPurityConcurrence:
    def test_pure(self):
        v = np.array([1, 1j, 0, 1]) / math.sqrt(3)
        assert purity(DensityMatrix(np.outer(v, v.conj()))) == pytest.approx(1.0, abs=1e-15)

    def test_maximally_mixed(self):
        assert purity(DensityMatrix(np.eye(4) / 4)) == pytest.approx(0.25, abs=1e-15)

    def test_family_mixture_purity(self):
        assert purity(family_state(math.pi / 4, 0.0)) == pytest.approx(0.5, abs=1e-15)

    def test_bell(self):
        assert concurrence_two_qubit(family_state(math.pi / 4, 1.0)) == pytest.approx(1.0, abs=1e-8)

    def test_mixture(self):
        assert concurrence_two_qubit(family_state(math.pi / 4, 0.0)) == pytest.approx(0.0, abs=1e-8)

    def test_gamma_096(self):
        assert concurrence_two_qubit(family_state(math.pi / 4, 0.96)) == pytest.approx(0.96, abs=1e-8)

    def test_wrong_dim(self):
        with pytest.raises(DimensionMismatch):
            concurrence_two_qubit(DensityMatrix(np.eye(2) / 2))

    def test_product_state_zero(self):
        rng = np.random.default_rng(3)
        a, b = random_density(rng, 2), random_density(rng, 2)
        assert concurrence_two_qubit(DensityMatrix(np.kron(a.matrix, b.matrix))) == pytest.approx(0, abs=1e-8)

    @pytest.mark.parametrize("alpha", np.linspace(0, math.pi / 2, 7))
    @pytest.mark.parametrize("gamma", np.linspace(0, 1, 6))
    def test_family_closed_form(self, alpha, gamma):
        rho = family_state(alpha, gamma)
        assert concurrence_two_qubit(rho) == pytest.approx(gamma * abs(math.sin(2 * alpha)), abs=1e-8)
