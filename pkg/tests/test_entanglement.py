import numpy as np
import pytest
from hypothesis import given, strategies as st

from entevidence import entanglement as ent
from entevidence import states
from entevidence.errors import DimensionError, InconclusiveError, ValidationError
from entevidence.rng import stream

from conftest import random_ket, random_unitary


def test_bell_negativity_and_spectrum():
    rho = states.pure_density(states.phi_plus())
    assert ent.negativity(rho) == pytest.approx(0.5, abs=1e-12)
    assert np.allclose(ent.pt_spectrum(rho), [-0.5, 0.5, 0.5, 0.5])
    assert ent.ppt_verdict(rho) is ent.PPTVerdict.ENTANGLED


def test_separable_verdicts():
    assert ent.ppt_verdict(states.cat_mixed()) is ent.PPTVerdict.SEPARABLE
    assert ent.negativity(states.maximally_mixed((2, 3))) == 0


def test_ppt_inconclusive_beyond_2x3():
    with pytest.raises(InconclusiveError):
        ent.ppt_verdict(states.maximally_mixed((3, 3)))
    # NPT states are entangled in any dimension
    v = np.zeros(9)
    v[0] = v[4] = v[8] = 1 / np.sqrt(3)
    rho = states.pure_density(states.state_vector(v, (3, 3)))
    assert ent.ppt_verdict(rho) is ent.PPTVerdict.ENTANGLED
    assert ent.negativity(rho) == pytest.approx(1.0)


def test_werner_threshold():
    phi = states.pure_density(states.phi_plus()).matrix
    for p, entangled in ((0.3, False), (1 / 3, False), (0.34, True), (0.9, True)):
        rho = states.density_matrix(p * phi + (1 - p) * np.eye(4) / 4, (2, 2))
        assert ent.negativity(rho) == pytest.approx(max(0.0, (3 * p - 1) / 4), abs=1e-12)
        assert (ent.ppt_verdict(rho) is ent.PPTVerdict.ENTANGLED) == entangled


def test_schmidt_of_product_and_bell():
    s = ent.schmidt(states.product_state([0.6, 0.8j], [1, 0, 0]))
    assert np.allclose(s.coefficients, [1, 0])
    assert s.rank == 1 and ent.is_separable_pure(states.product_state([1, 0], [0, 1]))
    s = ent.schmidt(states.phi_plus())
    assert np.allclose(s.coefficients, [np.sqrt(0.5)] * 2)
    assert s.rank == 2


def test_schmidt_bases_orthonormal(rng):
    psi = random_ket(rng, 6)
    s = ent.schmidt(psi, (3, 2))
    assert s.left.shape == (3, 2) and s.right.shape == (2, 2)
    assert np.allclose(s.left.conj().T @ s.left, np.eye(2))
    assert np.allclose(s.right.conj().T @ s.right, np.eye(2))
    assert np.allclose(s.reconstruct(), psi)


def test_schmidt_rejects_bad_input():
    with pytest.raises(DimensionError):
        ent.schmidt(np.ones(8) / np.sqrt(8), (2, 2, 2))
    with pytest.raises(ValidationError):
        ent.schmidt(np.ones(4), (2, 2))


@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)]))
def test_schmidt_round_trip(seed, dims):
    rng = np.random.default_rng(seed)
    psi = random_ket(rng, dims[0] * dims[1])
    s = ent.schmidt(psi, dims)
    assert np.linalg.norm(s.reconstruct() - psi) < 1e-10
    assert abs(np.sum(s.coefficients**2) - 1) < 1e-12
    assert np.all(np.diff(s.coefficients) <= 1e-15)


@given(st.integers(0, 2**32 - 1))
def test_pure_negativity_from_schmidt(seed):
    # for pure states N = ((sum lambda)^2 - 1) / 2
    rng = np.random.default_rng(seed)
    psi = random_ket(rng, 4)
    lam = ent.schmidt_coefficients(psi, (2, 2))
    rho = states.pure_density(states.state_vector(psi, (2, 2)))
    assert ent.negativity(rho) == pytest.approx((lam.sum() ** 2 - 1) / 2, abs=1e-10)


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_separable_mixtures_have_zero_negativity(seed, k):
    rho = ent.random_separable((2, 2), k, seed)
    assert ent.negativity(rho) < 1e-12


@given(st.integers(0, 2**32 - 1))
def test_negativity_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    R = G @ G.conj().T
    rho = states.density_matrix(R / np.trace(R).real, (2, 2))
    U = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
    rotated = states.density_matrix(U @ rho.matrix @ U.conj().T, (2, 2))
    assert abs(ent.negativity(rotated) - ent.negativity(rho)) < 1e-9


def test_random_product_state_is_product():
    psi = ent.random_product_state((2, 3), stream(5))
    assert ent.is_separable_pure(psi)
