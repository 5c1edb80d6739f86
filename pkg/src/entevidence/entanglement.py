"""Schmidt decomposition, partial-transpose negativity and the PPT verdict."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import rng as _rng
from . import tensor
from .errors import DimensionError, InconclusiveError, ValidationError
from .states import DensityMatrix, StateVector, as_density, mix, product_state, pure_density

TOL_NEG = 1e-7
TOL_SEPARABLE_PURE = 1e-8
PPT_CONCLUSIVE_DIMS = {(2, 2), (2, 3), (3, 2)}


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left: np.ndarray  # columns are the A-side vectors
    right: np.ndarray  # columns are the B-side vectors

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > TOL_SEPARABLE_PURE))

    def reconstruct(self) -> np.ndarray:
        return sum(
            lam * np.kron(self.left[:, i], self.right[:, i])
            for i, lam in enumerate(self.coefficients)
        )


def _bipartite(dims, size: int) -> tuple[int, int]:
    dims = tensor.check_dims(dims, size)
    if len(dims) != 2:
        raise DimensionError(f"expected a bipartite system, got dims {dims}")
    return dims


def _complete_basis(Q: np.ndarray, d: int) -> np.ndarray:
    """Extend orthonormal columns ``Q`` to a full basis of C^d."""
    cols = [Q[:, i] for i in range(Q.shape[1])]
    for e in np.eye(d, dtype=complex):
        if len(cols) == d:
            break
        v = e - sum(np.vdot(c, e) * c for c in cols) if cols else e.copy()
        n = np.linalg.norm(v)
        if n > 1e-6:
            cols.append(v / n)
    return np.column_stack(cols)


def schmidt(psi, dims: Sequence[int] | None = None) -> SchmidtDecomposition:
    """Schmidt form of a bipartite pure state.

    The left vectors diagonalize the reduced state on A; each right vector is
    the contraction of the state with the conjugate left vector.
    """
    v = np.asarray(psi, dtype=complex).reshape(-1)
    dims = tuple(dims) if dims is not None else getattr(psi, "dims", None)
    if dims is None:
        raise DimensionError("schmidt needs subsystem dims")
    dA, dB = _bipartite(dims, v.size)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-9:
        raise ValidationError(f"state vector has norm {norm:.12g}")
    C = v.reshape(dA, dB)
    _, V = tensor.hermitian_eigs(C @ C.conj().T)
    V = V[:, ::-1]
    n = min(dA, dB)
    R = V.conj().T @ C  # row i is lambda_i times the i-th right vector
    lam = np.linalg.norm(R, axis=1)
    order = np.argsort(-lam, kind="stable")[:n]
    lam, V, R = lam[order], V[:, order], R[order]
    kept = lam > 1e-12  # a prefix, since lam is descending
    right = _complete_basis(R[kept].T / lam[kept], dB)[:, :n]
    return SchmidtDecomposition(lam, V, right)


def schmidt_coefficients(psi, dims: Sequence[int] | None = None) -> np.ndarray:
    return schmidt(psi, dims).coefficients


def is_separable_pure(psi, dims: Sequence[int] | None = None, tol: float = TOL_SEPARABLE_PURE) -> bool:
    lam = schmidt_coefficients(psi, dims)
    return bool(lam.size < 2 or lam[1] <= tol)


def pt_spectrum(rho, dims: Sequence[int] | None = None, subsystem: int = 1) -> np.ndarray:
    """Ascending eigenvalues of the partial transpose."""
    R = as_density(rho, dims)
    _bipartite(R.dims, R.dim)
    return tensor.eigvalsh(tensor.partial_transpose(R.matrix, R.dims, subsystem))


def negativity(rho, dims: Sequence[int] | None = None) -> float:
    """Sum of the magnitudes of the negative partial-transpose eigenvalues."""
    w = pt_spectrum(rho, dims)
    return float(np.sum(np.clip(-w, 0.0, None)))


class PPTVerdict(enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"


def ppt_verdict(rho, dims: Sequence[int] | None = None, tol: float = TOL_NEG) -> PPTVerdict:
    """Peres-Horodecki decision.

    ``ENTANGLED`` is valid in any dimension.  A PPT state is only declared
    separable for 2x2 and 2x3 systems; elsewhere :class:`InconclusiveError`
    is raised.
    """
    R = as_density(rho, dims)
    if negativity(R) > tol:
        return PPTVerdict.ENTANGLED
    if tuple(R.dims) not in PPT_CONCLUSIVE_DIMS:
        raise InconclusiveError(f"state is PPT but the criterion is not sufficient for dims {R.dims}")
    return PPTVerdict.SEPARABLE


def _random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_product_state(dims: Sequence[int], rng: np.random.Generator) -> StateVector:
    return product_state(*(_random_unit(rng, d) for d in dims))


def random_separable(dims: Sequence[int], k: int, seed: int) -> DensityMatrix:
    """Random convex mixture of ``k`` product pure states (Dirichlet weights)."""
    if k < 1:
        raise ValidationError("component count must be at least 1")
    gen = _rng.stream(seed, 0)
    states = [random_product_state(dims, gen) for _ in range(k)]
    if k == 1:
        return pure_density(states[0])
    weights = gen.dirichlet(np.ones(k))
    comps = [(float(w), s) for w, s in zip(weights, states)]
    # float rounding in the weights must not trip the sum-to-one check
    total = sum(w for w, _ in comps)
    comps[-1] = (comps[-1][0] + 1.0 - total, comps[-1][1])
    return mix(comps)
