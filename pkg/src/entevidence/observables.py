"""Hermitian observables, projective measurement statistics and joint eigenbases."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import rng as _rng
from . import tensor
from .errors import DimensionError, ValidationError

TOL_DEGENERATE = 1e-8
TOL_COMMUTE = 1e-9
TOL_BASIS = 1e-9
TOL_SCHMIDT = 1e-8

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# eigenvectors as columns, ordered (+1, -1)
_S = np.sqrt(0.5)
PAULI_EIGENBASIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[_S, _S], [_S, -_S]], dtype=complex),
    "Y": np.array([[_S, _S], [1j * _S, -1j * _S]], dtype=complex),
    "Z": np.eye(2, dtype=complex),
}


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian operator, optionally with a known eigenbasis.

    ``declared_eigenbasis`` holds eigenvectors as columns; ``product_basis``
    marks it as a basis of product vectors.  ``outcome_labels`` maps outcome
    values to display names.
    """

    matrix: np.ndarray
    label: str = ""
    declared_eigenbasis: np.ndarray | None = None
    product_basis: bool = False
    outcome_labels: Mapping[float, str] | None = field(default=None)

    def __post_init__(self):
        M = tensor.require_hermitian(self.matrix).copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        if self.declared_eigenbasis is not None:
            U = tensor.as_matrix(self.declared_eigenbasis).copy()
            if U.shape != M.shape:
                raise DimensionError("declared eigenbasis has the wrong size")
            if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) > TOL_BASIS:
                raise ValidationError("declared eigenbasis is not orthonormal")
            if not _diagonalizes(U, M):
                raise ValidationError(f"declared eigenbasis does not diagonalize {self.label or 'observable'}")
            U.setflags(write=False)
            object.__setattr__(self, "declared_eigenbasis", U)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def label_for(self, outcome: float) -> str:
        if self.outcome_labels:
            for value, name in self.outcome_labels.items():
                if abs(value - outcome) <= 1e-9:
                    return name
        return f"{outcome:+.6g}"

    def spectral_range(self) -> tuple[float, float]:
        w = tensor.eigvalsh(self.matrix)
        return float(w[0]), float(w[-1])


def _diagonalizes(U: np.ndarray, M: np.ndarray, tol: float = TOL_BASIS) -> bool:
    D = U.conj().T @ M @ U
    off = D - np.diag(np.diag(D))
    return bool(np.max(np.abs(off), initial=0.0) <= tol * max(1.0, np.max(np.abs(M))))


def as_observable(A) -> Observable:
    if isinstance(A, Observable):
        return A
    if isinstance(A, str):
        return pauli(A)
    return Observable(np.asarray(A, dtype=complex))


def pauli(label: str) -> Observable:
    """Parse a Pauli string such as ``"ZZ"``, ``"XI"`` or ``"-YX"``.

    Qubit 0 is the leftmost letter.
    """
    text = label.strip().replace(" ", "").upper()
    sign = 1.0
    if text and text[0] in "+-":
        sign = -1.0 if text[0] == "-" else 1.0
        text = text[1:]
    if not text or any(ch not in PAULI for ch in text):
        raise ValidationError(f"invalid Pauli string {label!r}; use letters I, X, Y, Z")
    M = sign * tensor.kron_all(PAULI[ch] for ch in text)
    U = tensor.kron_all(PAULI_EIGENBASIS[ch] for ch in text)
    return Observable(M, label=label.strip(), declared_eigenbasis=U, product_basis=True)


def from_grid(re, im=None, label: str = "") -> Observable:
    """Observable from real and imaginary component grids (row-major)."""
    M = np.asarray(re, dtype=float).astype(complex)
    if im is not None:
        M = M + 1j * np.asarray(im, dtype=float)
    return Observable(M, label=label)


def basis_measurement(basis, labels: Sequence[str] | None = None, product: bool = False, label: str = "") -> Observable:
    """Observable whose outcome ``k`` corresponds to the ``k``-th basis column."""
    U = tensor.as_matrix(basis)
    d = U.shape[0]
    M = (U * np.arange(d, dtype=float)) @ U.conj().T
    names = {float(k): str(labels[k]) for k in range(d)} if labels is not None else None
    return Observable(0.5 * (M + M.conj().T), label=label, declared_eigenbasis=U,
                      product_basis=product, outcome_labels=names)


def pauli_setting(setting: str) -> Observable:
    """Product measurement in the eigenbases named by ``setting`` (e.g. ``"XZ"``).

    Outcome ``k`` enumerates the sign patterns ``++, +-, -+, --`` (qubit 0 slow).
    """
    setting = setting.strip().upper()
    if not setting or any(ch not in "XYZ" for ch in setting):
        raise ValidationError(f"invalid measurement setting {setting!r}; use letters X, Y, Z")
    U = tensor.kron_all(PAULI_EIGENBASIS[ch] for ch in setting)
    n = len(setting)
    labels = ["".join("+-"[(k >> (n - 1 - j)) & 1] for j in range(n)) for k in range(2 ** n)]
    return basis_measurement(U, labels, product=True, label=setting)


def expectation(rho, A) -> float:
    """``Tr(rho A)`` as a real number."""
    R = np.asarray(rho, dtype=complex)
    M = as_observable(A).matrix
    if R.shape != M.shape:
        raise DimensionError(f"state is {R.shape}, observable is {M.shape}")
    val = np.einsum("ij,ji->", R, M)
    if abs(val.imag) > 1e-6:
        raise ValidationError(f"expectation has imaginary part {val.imag:.3e}; inputs are not valid")
    return float(val.real)


def commutator(A, B) -> np.ndarray:
    a, b = as_observable(A).matrix, as_observable(B).matrix
    if a.shape != b.shape:
        raise DimensionError("observables act on different spaces")
    return a @ b - b @ a


def commutes(A, B, tol: float = TOL_COMMUTE) -> bool:
    return bool(np.max(np.abs(commutator(A, B)), initial=0.0) <= tol)


def _group(values: np.ndarray, tol: float) -> list[list[int]]:
    """Split sorted ``values`` into runs whose neighbours differ by at most ``tol``."""
    groups = []
    for k, v in enumerate(values):
        if groups and v - values[groups[-1][-1]] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def _eig_with_basis(A: Observable):
    if A.declared_eigenbasis is not None:
        U = A.declared_eigenbasis
        w = np.real(np.diag(U.conj().T @ A.matrix @ U))
        order = np.argsort(w, kind="stable")
        return w[order], U[:, order]
    return tensor.hermitian_eigs(A.matrix)


def spectral_projectors(A) -> list[tuple[float, np.ndarray]]:
    """Distinct outcomes (ascending) with their orthogonal projectors."""
    A = as_observable(A)
    w, V = _eig_with_basis(A)
    width = w[-1] - w[0]
    tol = TOL_DEGENERATE * max(width, 1e-300)
    out = []
    for g in _group(w, tol):
        Q = V[:, g]
        out.append((float(np.round(np.mean(w[g]), 12)) + 0.0, Q @ Q.conj().T))
    return out


def born_distribution(rho, A) -> dict[float, float]:
    """Outcome probabilities ``Tr(rho P_k)``, clipped to [0, 1] and renormalized."""
    R = np.asarray(rho, dtype=complex)
    A = as_observable(A)
    if R.shape != A.matrix.shape:
        raise DimensionError(f"state is {R.shape}, observable is {A.matrix.shape}")
    outcomes, probs = [], []
    for value, P in spectral_projectors(A):
        outcomes.append(value)
        probs.append(np.real(np.einsum("ij,ji->", R, P)))
    probs = np.array(probs)
    if np.any(probs < -1e-9):
        raise ValidationError(f"negative outcome probability {probs.min():.3e}")
    probs = np.clip(probs, 0.0, 1.0)
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"outcome probabilities sum to {total:.12g}")
    probs = probs / total
    return dict(zip(outcomes, (float(p) for p in probs)))


def sample_outcomes(rho, A, shots: int, seed: int, stream: int = 0) -> dict[float, int]:
    """Multinomial shot counts for measuring ``A`` on ``rho``.

    The draw uses the ``(seed, stream)`` generator from :mod:`entevidence.rng`.
    """
    shots = int(shots)
    if shots < 1:
        raise ValidationError("shots must be at least 1")
    dist = born_distribution(rho, A)
    p = np.array(list(dist.values()))
    counts = _rng.stream(seed, stream).multinomial(shots, p / p.sum())
    return {k: int(c) for k, c in zip(dist, counts)}


class BasisKind(enum.Enum):
    PRODUCT = "ProductBasis"
    NONE = "None"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class BasisAnalysis:
    kind: BasisKind
    basis: np.ndarray | None = None
    reason: str = ""

    def __bool__(self):
        return self.kind is BasisKind.PRODUCT


def _is_product_vector(v: np.ndarray, dims) -> bool:
    from .entanglement import schmidt_coefficients

    lam = schmidt_coefficients(v, dims)
    return lam.size < 2 or lam[1] <= TOL_SCHMIDT


def _joint_blocks(mats: Sequence[np.ndarray], d: int) -> list[np.ndarray]:
    """Simultaneously diagonalize commuting Hermitian matrices.

    Returns orthonormal blocks (column sets) spanning the joint eigenspaces.
    """
    blocks = [np.eye(d, dtype=complex)]
    for M in mats:
        refined = []
        for Q in blocks:
            if Q.shape[1] == 1:
                refined.append(Q)
                continue
            sub = Q.conj().T @ M @ Q
            w, W = tensor.hermitian_eigs(0.5 * (sub + sub.conj().T))
            tol = TOL_DEGENERATE * max(w[-1] - w[0], 1e-300) + 1e-12 * max(1.0, np.max(np.abs(M)))
            for g in _group(w, tol):
                refined.append(Q @ W[:, g])
        blocks = refined
    return blocks


def _candidate_product_bases(dims):
    if all(d == 2 for d in dims):
        n = len(dims)
        letters = "ZXY"
        for idx in np.ndindex(*(3,) * n):
            yield tensor.kron_all(PAULI_EIGENBASIS[letters[i]] for i in idx)
    else:
        yield np.eye(int(np.prod(dims)), dtype=complex)


def common_product_eigenbasis(observables, dims) -> BasisAnalysis:
    """Decide whether one product basis diagonalizes every observable.

    Non-commuting pairs and joint eigenvectors that are provably entangled give
    ``NONE``; leftover joint degeneracy that no cheap candidate basis resolves
    gives ``UNKNOWN``.
    """
    obs = [as_observable(A) for A in observables]
    dims = tuple(int(x) for x in dims)
    d = int(np.prod(dims))
    if any(A.dim != d for A in obs):
        raise DimensionError("observable size does not match dims")
    if len(dims) != 2:
        return BasisAnalysis(BasisKind.UNKNOWN, reason=f"basis analysis needs a bipartite system, got dims {dims}")

    for i in range(len(obs)):
        for j in range(i + 1, len(obs)):
            if not commutes(obs[i], obs[j]):
                return BasisAnalysis(BasisKind.NONE, reason=f"{obs[i].label or i} and {obs[j].label or j} do not commute")

    mats = [A.matrix for A in obs]
    declared = [A.declared_eigenbasis for A in obs if A.declared_eigenbasis is not None and A.product_basis]
    for U in declared:
        if all(_diagonalizes(U, M) for M in mats):
            return BasisAnalysis(BasisKind.PRODUCT, U, "declared product eigenbasis")

    blocks = _joint_blocks(mats, d)
    singles = [Q[:, 0] for Q in blocks if Q.shape[1] == 1]
    entangled = [v for v in singles if not _is_product_vector(v, dims)]
    if entangled:
        return BasisAnalysis(BasisKind.NONE, reason="a non-degenerate joint eigenvector is entangled")
    if len(singles) == d:
        return BasisAnalysis(BasisKind.PRODUCT, np.column_stack(singles), "unique joint eigenbasis is a product basis")

    for U in _candidate_product_bases(dims):
        if all(_diagonalizes(U, M) for M in mats):
            return BasisAnalysis(BasisKind.PRODUCT, U, "candidate product basis diagonalizes all observables")
    if not all(x == 2 for x in dims):
        return BasisAnalysis(BasisKind.UNKNOWN, reason=f"degenerate joint spectrum; product search supports qubits only, got dims {dims}")
    return BasisAnalysis(BasisKind.UNKNOWN, reason="degenerate joint spectrum; no product eigenbasis found among candidates")


def pauli_labels(n: int, include_identity: bool = False) -> list[str]:
    """All Pauli strings on ``n`` qubits in I, X, Y, Z order."""
    from itertools import product

    labels = ["".join(p) for p in product("IXYZ", repeat=n)]
    return labels if include_identity else labels[1:]


__all__ = [
    "Observable", "PAULI", "pauli", "from_grid", "basis_measurement", "pauli_setting",
    "expectation", "commutator", "commutes", "spectral_projectors", "born_distribution",
    "sample_outcomes", "BasisKind", "BasisAnalysis", "common_product_eigenbasis", "pauli_labels",
]
