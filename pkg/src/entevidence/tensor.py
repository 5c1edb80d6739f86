"""Dense complex linear algebra on tensor-product spaces.

Subsystem 0 is always the slow (left) tensor factor, so for dims ``[2, 2]``
the basis order is ``|00>, |01>, |10>, |11>``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, MatrixTooLargeError, NotHermitianError

TOL_HERM = 1e-9
TOL_EIG = 1e-10
TOL_MINOR = 1e-10
PSD_SLACK = 1e-9

JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
MAX_MINOR_SIDE = 8


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite complex square array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def check_dims(dims: Sequence[int], side: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionError(f"invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) != side:
        raise DimensionError(f"dims {dims} have product {int(np.prod(dims))}, expected {side}")
    return dims


def is_hermitian(M, tol: float = TOL_HERM) -> bool:
    A = np.asarray(M, dtype=complex)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and bool(np.max(np.abs(A - A.conj().T), initial=0.0) <= tol)


def require_hermitian(M, tol: float = TOL_HERM) -> np.ndarray:
    A = as_matrix(M)
    dev = np.max(np.abs(A - A.conj().T), initial=0.0)
    if dev > tol:
        raise NotHermitianError(f"matrix deviates from Hermitian by {dev:.3e} (tol {tol:.1e})")
    return A


def kron(A, B) -> np.ndarray:
    """Tensor product with ``A`` as the slow index."""
    return np.kron(as_matrix(A), as_matrix(B))


def kron_all(factors: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for F in factors:
        out = np.kron(out, np.asarray(F, dtype=complex))
    return out


def partial_trace(M, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduce ``M`` to the subsystems listed in ``keep``.

    The kept subsystems stay in their original relative order.
    """
    A = as_matrix(M)
    dims = check_dims(dims, A.shape[0])
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep={keep} out of range for {n} subsystems")
    traced = [k for k in range(n) if k not in keep]

    T = A.reshape(dims + dims)
    # einsum labels: row index i_k, column index j_k; traced factors share a label.
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise DimensionError("too many subsystems")
    rows = [letters[k] for k in range(n)]
    cols = [letters[n + k] if k in keep else letters[k] for k in range(n)]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    R = np.einsum("".join(rows) + "".join(cols) + "->" + out, T)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return R.reshape(d_keep, d_keep)


def partial_transpose(M, dims: Sequence[int], subsystem: int = 1) -> np.ndarray:
    """Transpose the tensor factor ``subsystem`` only.

    For two factors and ``subsystem=1`` this maps entry ``((i,j),(k,l))``
    to ``((i,l),(k,j))``.
    """
    A = as_matrix(M)
    dims = check_dims(dims, A.shape[0])
    n = len(dims)
    if not 0 <= subsystem < n:
        raise DimensionError(f"subsystem {subsystem} out of range for {n} subsystems")
    T = A.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[subsystem], axes[n + subsystem] = axes[n + subsystem], axes[subsystem]
    return T.transpose(axes).reshape(A.shape)


def _phase_fix(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v
    c = v[idx[0]]
    return v * (abs(c) / c)


def _lex_key(v: np.ndarray) -> tuple:
    # descending lexicographic order: e_0 sorts before e_1
    return tuple(x for z in np.round(v, 12) for x in (-z.real, -z.imag))


def hermitian_eigs(M, tol_herm: float = TOL_HERM, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, V)`` with ``w`` ascending and the columns of ``V`` the
    matching orthonormal eigenvectors.  Each eigenvector is phase fixed so its
    first non-negligible component is real and positive; exactly degenerate
    eigenvalues are ordered by their eigenvectors (descending lexicographic).
    """
    A = require_hermitian(M, tol_herm).copy()
    A = 0.5 * (A + A.conj().T)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    norm_f = np.linalg.norm(A)
    threshold = JACOBI_REL_TOL * norm_f

    offdiag = ~np.eye(n, dtype=bool)

    def off_mass(X):
        return np.linalg.norm(X[offdiag])

    sweeps = 0
    while off_mass(A) > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                b = abs(apq)
                if b <= 1e-300:
                    continue
                phase = apq / b
                app, aqq = A[p, p].real, A[q, q].real
                tau = (aqq - app) / (2.0 * b)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                U = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = A[:, [p, q]] @ U
                A[:, p], A[:, q] = cols[:, 0], cols[:, 1]
                rows = U.conj().T @ A[[p, q], :]
                A[p, :], A[q, :] = rows[0], rows[1]
                A[p, q] = A[q, p] = 0.0
                A[p, p], A[q, q] = A[p, p].real, A[q, q].real
                vc = V[:, [p, q]] @ U
                V[:, p], V[:, q] = vc[:, 0], vc[:, 1]

    w = np.diag(A).real.copy()
    vecs = [_phase_fix(V[:, k]) for k in range(n)]
    # ties are values equal to solver accuracy
    quantum = max(norm_f, 1.0) * 1e-12
    order = sorted(range(n), key=lambda k: (np.round(w[k] / quantum), _lex_key(vecs[k])))
    w = w[order]
    V = np.column_stack([vecs[k] for k in order]) if n else V
    return w, V


def eigvalsh(M) -> np.ndarray:
    return hermitian_eigs(M)[0]


def is_psd(M, tol: float = PSD_SLACK) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol``."""
    w, _ = hermitian_eigs(M, tol_herm=max(TOL_HERM, tol))
    return bool(w[0] >= -tol) if w.size else True


def principal_minors(M) -> dict[tuple[int, ...], float]:
    """All ``2**m - 1`` principal minors keyed by their row/column subset."""
    A = require_hermitian(M)
    m = A.shape[0]
    if m > MAX_MINOR_SIDE:
        raise MatrixTooLargeError(f"{m}x{m} has {2 ** m - 1} principal minors; use is_psd instead")
    minors = {}
    for k in range(1, m + 1):
        for idx in combinations(range(m), k):
            minors[idx] = float(np.linalg.det(A[np.ix_(idx, idx)]).real)
    return minors


def principal_minors_psd(M, tol: float = TOL_MINOR) -> bool:
    """Sylvester-type PSD test: every principal minor must be non-negative.

    A minor of order ``k`` is compared against ``-tol * s**k`` where ``s`` is
    the largest entry magnitude, so the test is invariant to overall scale.
    """
    minors = principal_minors(M)
    s = max(np.max(np.abs(np.asarray(M, dtype=complex))), 1e-300)
    return all(v >= -tol * s ** len(idx) for idx, v in minors.items())
