"""Simulated two-qubit state tomography with product Pauli measurements."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import tensor
from .errors import ValidationError
from .observables import PAULI, pauli_setting, sample_outcomes
from .states import DensityMatrix, as_density

PAULI_SETTINGS = tuple("".join(p) for p in product("XYZ", repeat=2))
COMPUTATIONAL = ("ZZ",)


class InsufficientSettingsError(ValidationError):
    """The measured settings do not determine every Pauli expectation."""


@dataclass(frozen=True, eq=False)
class TomographyResult:
    estimate: DensityMatrix
    linear_estimate: np.ndarray  # before the positivity projection
    expectations: dict[str, float]  # estimated Pauli expectations, identity excluded
    tables: dict[str, dict[str, int]]  # setting -> outcome label -> count
    shots_per_setting: int
    seed: int


def project_to_density(M, dims=(2, 2)) -> DensityMatrix:
    """Nearest density matrix to Hermitian ``M`` in Frobenius norm.

    The eigenvalues are projected onto the probability simplex; eigenvectors
    are kept.
    """
    H = np.asarray(M, dtype=complex)
    w, V = tensor.hermitian_eigs(0.5 * (H + H.conj().T))
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, u.size + 1)
    rho_idx = np.nonzero(u - css / k > 0)[0][-1]
    shift = css[rho_idx] / (rho_idx + 1)
    p = np.clip(w - shift, 0.0, None)
    R = (V * p) @ V.conj().T
    return DensityMatrix(0.5 * (R + R.conj().T), tuple(dims))


def _covers(setting: str, pauli: str) -> bool:
    return all(p == "I" or p == s for p, s in zip(pauli, setting))


def estimate_expectations(tables: dict[str, dict[str, int]]) -> dict[str, float]:
    """Pauli expectations averaged over every setting that measures them."""
    sums: dict[str, float] = {}
    hits: dict[str, int] = {}
    for setting, table in tables.items():
        shots = sum(table.values())
        for pauli in ("".join(p) for p in product("IXYZ", repeat=len(setting))):
            if pauli == "I" * len(setting) or not _covers(setting, pauli):
                continue
            total = 0
            for label, count in table.items():
                sign = 1
                for p, bit in zip(pauli, label):
                    if p != "I" and bit == "-":
                        sign = -sign
                total += sign * count
            sums[pauli] = sums.get(pauli, 0.0) + total / shots
            hits[pauli] = hits.get(pauli, 0) + 1
    return {p: sums[p] / hits[p] for p in sorted(sums)}


def linear_inversion(expectations: dict[str, float]) -> np.ndarray:
    """``(I + sum_P <P> P) / 4``; Paulis that were not measured contribute zero."""
    M = np.eye(4, dtype=complex)
    for label, value in expectations.items():
        M = M + value * np.kron(PAULI[label[0]], PAULI[label[1]])
    return M / 4


def tomography_two_qubit(rho, settings: Sequence[str] = PAULI_SETTINGS, shots_per_setting: int = 10_000,
                         seed: int = 0, mode: str = "full") -> TomographyResult:
    """Measure ``rho`` in each product setting, then reconstruct.

    ``mode="full"`` requires every one of the 15 Pauli expectations to be
    covered by some setting; ``mode="partial"`` fills unmeasured ones with 0,
    which leaves the estimate maximally mixed in every direction the settings
    cannot see.  Setting ``k`` samples from stream ``(seed, k)``.
    """
    R = as_density(rho)
    if R.dims != (2, 2):
        raise ValidationError(f"two-qubit tomography needs dims (2, 2), got {R.dims}")
    settings = [s.strip().upper() for s in settings]
    if len(set(settings)) != len(settings):
        raise ValidationError("measurement settings must be distinct")
    if not settings:
        raise InsufficientSettingsError("no measurement settings given")
    if mode not in ("full", "partial"):
        raise ValidationError(f"unknown reconstruction mode {mode!r}")
    if mode == "full":
        paulis = ["".join(q) for q in product("IXYZ", repeat=2)][1:]
        missing = [p for p in paulis if not any(_covers(s, p) for s in settings)]
        if missing:
            raise InsufficientSettingsError(f"settings {settings} never measure {', '.join(missing)}")

    tables = {}
    for k, setting in enumerate(settings):
        meas = pauli_setting(setting)
        counts = sample_outcomes(R, meas, shots_per_setting, seed, stream=k)
        tables[setting] = {meas.label_for(v): c for v, c in counts.items()}
    exps = estimate_expectations(tables)
    M = linear_inversion(exps)
    return TomographyResult(project_to_density(M), M, exps, tables, int(shots_per_setting), int(seed))
