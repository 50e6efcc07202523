import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_hermitian
from nffprep.chebyshev import ChebyshevSeries
from nffprep.errors import NonHermitian, SpectrumOutOfRange, DomainError
from nffprep.hamiltonians import QUINTIC, grover_hamiltonian
from nffprep.filters import make_step_filter
from nffprep.spectral import (
    HermitianOperator,
    apply_poly_clenshaw,
    apply_poly_exact,
    apply_poly_exact_vector,
    clenshaw,
    decompose,
    extreme_eigenvalues,
)


def test_identity_decomposition():
    dec = decompose(np.eye(4))
    np.testing.assert_allclose(dec.eigenvalues, np.ones(4))


def test_diagonal_decomposition_is_standard_basis():
    dec = decompose(np.diag([-1.0, 0.0, 1.0]))
    np.testing.assert_allclose(dec.eigenvalues, [-1, 0, 1])
    np.testing.assert_allclose(np.abs(dec.eigenvectors), np.eye(3))


def test_grover_16_lowest_eigenvalue():
    assert decompose(grover_hamiltonian(16).operator).eigenvalues[0] == pytest.approx(-0.25, abs=1e-12)


def test_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_rejects_small_and_non_square():
    with pytest.raises(DomainError):
        HermitianOperator(np.ones((1, 1)))
    with pytest.raises(DomainError):
        HermitianOperator(np.ones((2, 3)))


def test_operator_matrix_is_read_only():
    op = HermitianOperator(np.eye(2))
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 5.0


def test_reconstruction_and_orthonormality(rng):
    a = random_hermitian(rng, 30)
    dec = decompose(a)
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    assert np.linalg.norm(dec.reconstruct() - a, 2) <= 1e-10 * np.linalg.norm(a, 2)
    v = dec.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(30))) <= 1e-10
    # decompose o reconstruct is idempotent
    again = decompose(dec.reconstruct())
    np.testing.assert_allclose(again.eigenvalues, dec.eigenvalues, atol=1e-10)


def test_apply_identity_polynomial(rng):
    a = random_hermitian(rng, 8)
    out = apply_poly_exact(a, ChebyshevSeries.identity())
    np.testing.assert_allclose(out.matrix, a, atol=1e-12)


def test_apply_square_to_diagonal():
    sq = ChebyshevSeries([0.5, 0.0, 0.5])  # x^2 = (T0 + T2) / 2
    out = apply_poly_exact(np.diag([-1.0, 0.0, 1.0]), sq)
    np.testing.assert_allclose(out.matrix, np.diag([1.0, 0.0, 1.0]), atol=1e-14)


def test_quintic_at_minus_half():
    out = apply_poly_exact(np.diag([-0.5, -0.5]), QUINTIC.series())
    np.testing.assert_allclose(out.matrix, -np.eye(2), atol=1e-14)


def test_spectrum_out_of_range():
    with pytest.raises(SpectrumOutOfRange):
        apply_poly_exact(np.diag([-1.5, 0.0]), ChebyshevSeries.identity())
    with pytest.raises(SpectrumOutOfRange):
        apply_poly_clenshaw(np.diag([0.0, 1.1]), ChebyshevSeries.identity(), np.ones(2))


def test_clenshaw_constant_and_t2():
    v = np.array([0.3, -0.7])
    np.testing.assert_allclose(apply_poly_clenshaw(np.diag([0.2, 0.9]), ChebyshevSeries.constant(1.0), v), v)
    t2 = ChebyshevSeries([0.0, 0.0, 1.0])
    out = apply_poly_clenshaw(np.diag([0.5, 0.5]), t2, np.array([1.0, 0.0]))
    np.testing.assert_allclose(out, [-0.5, 0.0], atol=1e-15)


def test_clenshaw_scalar_matches_numpy(rng):
    c = rng.standard_normal(30)
    x = 0.37
    got = clenshaw(lambda v: x * v, c, np.array([1.0]))[0]
    assert got == pytest.approx(np.polynomial.chebyshev.chebval(x, c), abs=1e-12)


def test_step_filter_routes_agree_on_grover():
    p = grover_hamiltonian(64)
    flt = make_step_filter(0.2, 0.3, 0.0)  # low-degree filter
    assert 10 <= flt.degree <= 80
    v = p.ansatz
    a = apply_poly_clenshaw(p.operator, flt.series, v)
    b = apply_poly_exact_vector(p.operator, flt.series, v)
    np.testing.assert_allclose(a, b, atol=1e-8)


@given(dim=st.integers(2, 64), degree=st.integers(0, 200), seed=st.integers(0, 2**31))
def test_routes_agree_random(dim, degree, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, dim)
    c = rng.standard_normal(degree + 1) / (1 + np.arange(degree + 1))
    p = ChebyshevSeries(c)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    scale = np.sum(np.abs(c)) * np.linalg.norm(v)
    np.testing.assert_allclose(
        apply_poly_clenshaw(a, p, v), apply_poly_exact_vector(a, p, v), atol=1e-10 * max(1.0, scale)
    )


@given(dim=st.integers(2, 40), seed=st.integers(0, 2**31))
def test_spectral_mapping_property(dim, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, dim, complex_=bool(seed % 2))
    p = make_step_filter(0.1, 0.5, 0.0).series
    mapped = np.sort(apply_poly_exact(a, p).decomposition.eigenvalues)
    np.testing.assert_allclose(mapped, np.sort(p(decompose(a).eigenvalues)), atol=1e-9)


def test_matrix_right_hand_side(rng):
    a = random_hermitian(rng, 12)
    p = ChebyshevSeries([0.1, 0.2, -0.3, 0.4])
    v = rng.standard_normal((12, 3))
    np.testing.assert_allclose(apply_poly_clenshaw(a, p, v), apply_poly_exact_vector(a, p, v), atol=1e-12)


def test_extreme_eigenvalues(rng):
    a = random_hermitian(rng, 20)
    lo, hi = extreme_eigenvalues(a)
    w = np.linalg.eigvalsh(a)
    assert lo == pytest.approx(w[0]) and hi == pytest.approx(w[-1])
