import numpy as np
import pytest
from hypothesis import given, strategies as st

from entevidence import observables as ob
from entevidence import states
from entevidence.errors import DimensionError, ValidationError

from conftest import random_density, random_hermitian, random_unitary


def test_pauli_parsing():
    zz = ob.pauli("ZZ")
    assert np.allclose(zz.matrix, np.diag([1, -1, -1, 1]))
    assert zz.product_basis
    assert np.allclose(ob.pauli("-XI").matrix, -np.kron(ob.PAULI["X"], np.eye(2)))
    assert np.allclose(ob.pauli("xy").matrix, np.kron(ob.PAULI["X"], ob.PAULI["Y"]))
    for bad in ("", "ZQ", "-"):
        with pytest.raises(ValidationError):
            ob.pauli(bad)


def test_pauli_eigenbases_are_ordered_plus_first():
    for ch in "XYZ":
        U = ob.PAULI_EIGENBASIS[ch]
        assert np.allclose(np.diag(U.conj().T @ ob.PAULI[ch] @ U), [1, -1])


def test_declared_basis_must_diagonalize():
    with pytest.raises(ValidationError):
        ob.Observable(ob.PAULI["X"], declared_eigenbasis=np.eye(2))


def test_expectations_of_cat():
    rho = states.pure_density(states.cat_pure(0.0))
    assert ob.expectation(rho, "ZZ") == pytest.approx(1)
    assert ob.expectation(rho, "ZI") == pytest.approx(0)
    for phi in (0.0, np.pi / 3, np.pi):
        rho = states.pure_density(states.cat_pure(phi))
        assert ob.expectation(rho, "XX") == pytest.approx(np.cos(phi))


def test_born_distribution_zz_on_cat():
    dist = ob.born_distribution(states.cat_mixed(), ob.pauli("ZZ"))
    assert dist == {-1.0: 0.0, 1.0: 1.0}


def test_sample_outcomes_is_reproducible():
    A = ob.pauli_setting("ZZ")
    rho = states.pure_density(states.phi_plus())
    a = ob.sample_outcomes(rho, A, 1000, seed=7, stream=3)
    b = ob.sample_outcomes(rho, A, 1000, seed=7, stream=3)
    c = ob.sample_outcomes(rho, A, 1000, seed=7, stream=4)
    assert a == b and a != c
    assert sum(a.values()) == 1000


def test_sample_outcomes_rejects_zero_shots():
    with pytest.raises(ValidationError):
        ob.sample_outcomes(states.cat_mixed(), "ZZ", 0, 0)


def test_pauli_setting_labels():
    A = ob.pauli_setting("XZ")
    probs = ob.born_distribution(states.pure_density(states.product_state([1, 1] / np.sqrt(2), [0, 1])), A)
    labelled = {A.label_for(k): v for k, v in probs.items()}
    assert labelled["+-"] == pytest.approx(1)


def test_commutation():
    assert ob.commutes("ZZ", "XX")
    assert not ob.commutes("XI", "ZI")
    assert np.allclose(ob.commutator("ZI", "ZZ"), 0)


def test_common_basis_cat_constraints_is_product():
    res = ob.common_product_eigenbasis([ob.pauli(s) for s in ("ZZ", "ZI", "IZ")], (2, 2))
    assert res.kind is ob.BasisKind.PRODUCT
    assert np.allclose(np.abs(res.basis), np.eye(4))


def test_common_basis_bell_stabilizers_is_none():
    # XX and ZZ commute, but their joint eigenvectors are the Bell states
    res = ob.common_product_eigenbasis([ob.Observable(ob.pauli("XX").matrix), ob.Observable(ob.pauli("ZZ").matrix)], (2, 2))
    assert res.kind is ob.BasisKind.NONE


def test_common_basis_noncommuting_is_none():
    assert ob.common_product_eigenbasis(["XI", "ZI"], (2, 2)).kind is ob.BasisKind.NONE


def test_common_basis_undeclared_product_found():
    A = ob.Observable(np.kron(ob.PAULI["X"], np.eye(2)))
    res = ob.common_product_eigenbasis([A], (2, 2))
    assert res.kind is ob.BasisKind.PRODUCT


def test_common_basis_tripartite_unknown():
    assert ob.common_product_eigenbasis(["ZZZ"], (2, 2, 2)).kind is ob.BasisKind.UNKNOWN


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        ob.born_distribution(states.cat_mixed(), "Z")


def test_pauli_labels():
    labels = ob.pauli_labels(2)
    assert len(labels) == 15 and "II" not in labels
    assert len(ob.pauli_labels(2, include_identity=True)) == 16


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4]))
def test_projectors_complete_and_orthogonal(seed, d):
    rng = np.random.default_rng(seed)
    A = random_hermitian(rng, d)
    projs = ob.spectral_projectors(A)
    assert np.allclose(sum(P for _, P in projs), np.eye(d), atol=1e-10)
    for i, (_, P) in enumerate(projs):
        assert np.allclose(P @ P, P, atol=1e-10)
        for _, Q in projs[i + 1:]:
            assert np.allclose(P @ Q, 0, atol=1e-10)
    assert np.allclose(sum(v * P for v, P in projs), A, atol=1e-10)


def test_degenerate_projectors(rng):
    U = random_unitary(rng, 4)
    A = U @ np.diag([1.0, 1.0, -2.0, 5.0]) @ U.conj().T
    projs = ob.spectral_projectors(A)
    assert [v for v, _ in projs] == [-2.0, 1.0, 5.0]
    assert np.trace(projs[1][1]).real == pytest.approx(2)


@given(st.integers(0, 2**32 - 1))
def test_born_probabilities_are_a_distribution(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, 4)
    p = ob.born_distribution(rho, random_hermitian(rng, 4))
    assert all(0 <= v <= 1 for v in p.values())
    assert sum(p.values()) == pytest.approx(1, abs=1e-12)
