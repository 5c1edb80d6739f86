"""State vectors, density matrices and the named states used throughout.

Constructors validate and reject; use :func:`normalize` to repair noisy
estimates explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tensor
from .errors import DimensionError, PositivityError, ValidationError

STATE_TOL = 1e-9

# outcome labels for the cat/nucleus basis, in index order
CAT_LABELS = ("alive&intact", "alive&decayed", "dead&intact", "dead&decayed")


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tensor.check_dims(self.dims, amps.size)
        norm = np.sum(np.abs(amps) ** 2)
        if abs(norm - 1.0) > STATE_TOL:
            raise ValidationError(f"state vector has squared norm {norm:.12g}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A Hermitian, unit-trace, positive semidefinite operator with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        M = tensor.as_matrix(self.matrix).copy()
        dims = tensor.check_dims(self.dims, M.shape[0])
        tensor.require_hermitian(M, STATE_TOL)
        tr = np.trace(M)
        if abs(tr - 1.0) > STATE_TOL:
            raise ValidationError(f"density matrix has trace {tr:.12g}, expected 1")
        w = tensor.eigvalsh(M)
        if w[0] < -STATE_TOL:
            raise PositivityError(f"density matrix has negative eigenvalue {w[0]:.3e}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def allclose(self, other, atol: float = 1e-9) -> bool:
        return np.allclose(self.matrix, np.asarray(other, dtype=complex), rtol=0.0, atol=atol)


def state_vector(amplitudes, dims: Sequence[int] | None = None) -> StateVector:
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    return StateVector(amps, tuple(dims) if dims is not None else (amps.size,))


def density_matrix(matrix, dims: Sequence[int] | None = None) -> DensityMatrix:
    M = np.asarray(matrix, dtype=complex)
    return DensityMatrix(M, tuple(dims) if dims is not None else (M.shape[0],))


def _dims_of(x, dims):
    if dims is not None:
        return tuple(dims)
    return getattr(x, "dims", None)


def as_density(rho, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Coerce a DensityMatrix, StateVector or raw array to a DensityMatrix."""
    if isinstance(rho, DensityMatrix) and (dims is None or tuple(dims) == rho.dims):
        return rho
    if isinstance(rho, StateVector):
        return pure_density(rho if dims is None else StateVector(rho.amplitudes, tuple(dims)))
    M = np.asarray(rho, dtype=complex)
    d = _dims_of(rho, dims)
    if M.ndim == 1:
        return pure_density(state_vector(M, d))
    return density_matrix(M, d)


def pure_density(psi: StateVector) -> DensityMatrix:
    """The rank-one projector onto ``psi``."""
    if not isinstance(psi, StateVector):
        psi = state_vector(psi)
    v = psi.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), psi.dims)


def normalize(x, dims: Sequence[int] | None = None):
    """Explicit repair of a noisy vector or matrix.

    Vectors are rescaled to unit norm.  Matrices are Hermitian-symmetrized,
    negative eigenvalues are clipped to zero and the trace renormalized.
    """
    A = np.asarray(x, dtype=complex)
    d = _dims_of(x, dims) or (A.shape[0],)
    if A.ndim == 1:
        n = np.linalg.norm(A)
        if n == 0:
            raise ValidationError("cannot normalize the zero vector")
        return StateVector(A / n, d)
    H = 0.5 * (A + A.conj().T)
    w, V = tensor.hermitian_eigs(H)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        raise ValidationError("matrix has no positive part to normalize")
    M = (V * (w / w.sum())) @ V.conj().T
    return DensityMatrix(0.5 * (M + M.conj().T), d)


def mix(components) -> DensityMatrix:
    """Convex combination of ``(weight, state)`` pairs."""
    components = list(components)
    if not components:
        raise ValidationError("mix needs at least one component")
    weights = np.array([float(w) for w, _ in components])
    if np.any(weights < 0):
        raise ValidationError("mixing weights must be non-negative")
    if abs(weights.sum() - 1.0) > STATE_TOL:
        raise ValidationError(f"mixing weights sum to {weights.sum():.12g}, expected 1")
    states = [as_density(r) for _, r in components]
    dims = states[0].dims
    if any(r.dims != dims for r in states):
        raise DimensionError("all mixed states must share subsystem dims")
    M = sum(w * r.matrix for w, r in zip(weights, states))
    return DensityMatrix(M, dims)


def purity(rho) -> float:
    R = as_density(rho).matrix
    return float(np.real(np.einsum("ij,ji->", R, R)))


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of the difference."""
    D = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    w = tensor.eigvalsh(0.5 * (D + D.conj().T))
    return 0.5 * float(np.sum(np.abs(w)))


def _check_basis(basis, dim: int) -> np.ndarray:
    U = tensor.as_matrix(basis)
    if U.shape[0] != dim:
        raise DimensionError(f"basis of size {U.shape[0]} for a {dim}-dimensional state")
    dev = np.max(np.abs(U.conj().T @ U - np.eye(dim)))
    if dev > STATE_TOL:
        raise ValidationError(f"basis is not orthonormal (deviation {dev:.3e})")
    return U


def dephase(rho, basis=None) -> DensityMatrix:
    """Delete all coherences in ``basis`` (columns are the basis vectors).

    Defaults to the computational product basis.
    """
    rho = as_density(rho)
    U = np.eye(rho.dim, dtype=complex) if basis is None else _check_basis(basis, rho.dim)
    p = np.real(np.einsum("ki,kl,li->i", U.conj(), rho.matrix, U))
    M = (U * p) @ U.conj().T
    return DensityMatrix(0.5 * (M + M.conj().T), rho.dims)


def basis_state(index: int, dims: Sequence[int]) -> StateVector:
    dims = tuple(dims)
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[int(index)] = 1.0
    return StateVector(v, dims)


def product_state(*factors) -> StateVector:
    """Tensor product of single-subsystem vectors (normalized each)."""
    vecs = [np.asarray(f, dtype=complex).reshape(-1) for f in factors]
    out = np.ones(1, dtype=complex)
    for v in vecs:
        out = np.kron(out, v / np.linalg.norm(v))
    return StateVector(out, tuple(v.size for v in vecs))


def cat_pure(phi: float = 0.0, p: float = 0.5) -> StateVector:
    """Cat/nucleus superposition ``sqrt(p)|alive,intact> + e^{i phi} sqrt(1-p)|dead,decayed>``."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"probability p={p} outside [0, 1]")
    phi = float(phi) % (2 * np.pi)
    return StateVector(np.array([np.sqrt(p), 0, 0, np.exp(1j * phi) * np.sqrt(1 - p)]), (2, 2))


def cat_mixed() -> DensityMatrix:
    return DensityMatrix(np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex), (2, 2))


def phi_plus() -> StateVector:
    return StateVector(np.array([1, 0, 0, 1]) * np.sqrt(0.5), (2, 2))


def ghz() -> StateVector:
    """Three-qubit GHZ state on parties ``A, B, B'``."""
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = np.sqrt(0.5)
    return StateVector(v, (2, 2, 2))


def beam_splitter_photon() -> StateVector:
    """One photon after a 50:50 beam splitter, two modes truncated to {0, 1} photons.

    The state is ``(|0>|1> + |1>|0>)/sqrt(2)``.
    """
    return StateVector(np.array([0, 1, 1, 0]) * np.sqrt(0.5), (2, 2))


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    d = int(np.prod(dims))
    return DensityMatrix(np.eye(d, dtype=complex) / d, tuple(dims))
