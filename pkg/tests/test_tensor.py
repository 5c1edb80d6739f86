import numpy as np
import pytest
from hypothesis import given, strategies as st

from entevidence import tensor
from entevidence.errors import DimensionError, NotHermitianError

from conftest import random_density, random_hermitian, random_unitary


def test_partial_transpose_matches_hand_indexing():
    M = np.arange(16).reshape(4, 4).astype(complex)
    # transpose of the second factor swaps (i,j,k,l) -> (i,l,k,j)
    expected = np.array([[0, 4, 2, 6], [1, 5, 3, 7], [8, 12, 10, 14], [9, 13, 11, 15]])
    assert np.array_equal(tensor.partial_transpose(M, (2, 2), 1), expected)
    expected_first = np.array([[0, 1, 8, 9], [4, 5, 12, 13], [2, 3, 10, 11], [6, 7, 14, 15]])
    assert np.array_equal(tensor.partial_transpose(M, (2, 2), 0), expected_first)


def test_partial_transposes_compose_to_full_transpose(rng):
    R = random_density(rng, 6)
    both = tensor.partial_transpose(tensor.partial_transpose(R, (2, 3), 0), (2, 3), 1)
    assert np.allclose(both, R.T, atol=1e-14)


def test_partial_trace_of_product(rng):
    A, B, C = (random_density(rng, d) for d in (2, 3, 2))
    M = tensor.kron_all([A, B, C])
    assert np.allclose(tensor.partial_trace(M, (2, 3, 2), [0]), A)
    assert np.allclose(tensor.partial_trace(M, (2, 3, 2), [1]), B)
    assert np.allclose(tensor.partial_trace(M, (2, 3, 2), [0, 2]), np.kron(A, C))


def test_partial_trace_keep_order_is_sorted(rng):
    A, B = random_density(rng, 2), random_density(rng, 3)
    M = np.kron(A, B)
    assert np.allclose(tensor.partial_trace(M, (2, 3), [1, 0]), M)


def test_dims_must_multiply_to_side():
    with pytest.raises(DimensionError):
        tensor.partial_trace(np.eye(4), (2, 3), [0])
    with pytest.raises(DimensionError):
        tensor.check_dims((2, 0), 0)


def test_require_hermitian_rejects():
    with pytest.raises(NotHermitianError):
        tensor.require_hermitian(np.array([[0, 1], [0, 0]]))


def test_jacobi_eigs_against_lapack(rng):
    for d in (1, 2, 3, 4, 6, 9):
        H = random_hermitian(rng, d)
        w, V = tensor.hermitian_eigs(H)
        assert np.allclose(w, np.linalg.eigvalsh(H), atol=1e-12)
        assert np.allclose(V.conj().T @ V, np.eye(d), atol=1e-12)
        assert np.allclose((V * w) @ V.conj().T, H, atol=1e-12)


def test_jacobi_handles_degenerate_and_diagonal():
    w, V = tensor.hermitian_eigs(np.eye(4))
    assert np.array_equal(w, np.ones(4))
    assert np.allclose(V, np.eye(4))
    H = np.diag([3.0, 1.0, 2.0]).astype(complex)
    w, V = tensor.hermitian_eigs(H)
    assert np.allclose(w, [1, 2, 3])


def test_jacobi_is_deterministic(rng):
    H = random_hermitian(rng, 4)
    w1, V1 = tensor.hermitian_eigs(H)
    w2, V2 = tensor.hermitian_eigs(H.copy())
    assert np.array_equal(w1, w2) and np.array_equal(V1, V2)


def test_eigenvectors_are_phase_fixed(rng):
    _, V = tensor.hermitian_eigs(random_hermitian(rng, 4))
    for v in V.T:
        k = np.argmax(np.abs(v) > 1e-12)
        assert abs(v[k].imag) < 1e-14 and v[k].real > 0


def test_principal_minors_count():
    assert len(tensor.principal_minors(np.eye(4))) == 15


def test_psd_checks_agree_on_rank_deficient(rng):
    R = random_density(rng, 4, rank=2)
    assert tensor.is_psd(R)
    assert tensor.principal_minors_psd(R)
    bad = R - 0.01 * np.eye(4)
    assert not tensor.is_psd(bad)
    assert not tensor.principal_minors_psd(bad)


@given(st.integers(0, 2**32 - 1))
def test_unitary_conjugation_preserves_spectrum(seed):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, 4)
    U = random_unitary(rng, 4)
    assert np.allclose(tensor.eigvalsh(U @ H @ U.conj().T), tensor.eigvalsh(H), atol=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_partial_trace_preserves_trace(seed):
    rng = np.random.default_rng(seed)
    R = random_density(rng, 12)
    for keep in ([0], [1], [2], [0, 2]):
        assert abs(np.trace(tensor.partial_trace(R, (2, 3, 2), keep)) - 1) < 1e-12
