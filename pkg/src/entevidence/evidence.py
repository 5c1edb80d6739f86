"""Entanglement evidence from measured expectation values.

A list of constraints ``Tr(rho A_i) = a_i (+- tol_i)`` defines a convex set of
compatible density matrices.  Entanglement is evidenced only if *every*
compatible state is entangled, so the deciding quantity is the minimum
negativity over that set.  This module bounds that minimum (and the maximum)
numerically, and produces separable certificates when all observables share a
product eigenbasis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .entanglement import PPT_CONCLUSIVE_DIMS, negativity
from .errors import DimensionError, InfeasibleConstraintsError, PositivityError, ValidationError
from .observables import BasisAnalysis, BasisKind, Observable, as_observable, common_product_eigenbasis, expectation
from .search import SearchProblem, run_search
from .states import DensityMatrix, as_density

TOL_NEG = 1e-4
EVIDENCE_MARGIN = 10.0
FEASIBLE_RESIDUAL = 1e-6
INFEASIBLE_RESIDUAL = 1e-4
CERTIFICATE_NEGATIVITY = 1e-9
MAX_OPTIMIZER_DIM = 9


@dataclass(frozen=True)
class Constraint:
    observable: Observable
    value: float
    tolerance: float = 0.0

    def __post_init__(self):
        obs = as_observable(self.observable)
        object.__setattr__(self, "observable", obs)
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "tolerance", float(self.tolerance))
        if self.tolerance < 0:
            raise ValidationError("constraint tolerance must be non-negative")
        lo, hi = obs.spectral_range()
        slack = self.tolerance + 1e-9
        if not lo - slack <= self.value <= hi + slack:
            raise ValidationError(
                f"value {self.value} for {obs.label or 'observable'} is outside its spectrum [{lo:.6g}, {hi:.6g}]"
            )


@dataclass(frozen=True)
class ConstraintSet:
    dims: tuple[int, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        cons = tuple(c if isinstance(c, Constraint) else Constraint(*c) for c in self.constraints)
        d = int(np.prod(dims))
        for c in cons:
            if c.observable.dim != d:
                raise DimensionError(f"observable {c.observable.label!r} does not act on dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "constraints", cons)

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    @property
    def observables(self) -> list[Observable]:
        return [c.observable for c in self.constraints]

    def excesses(self, rho) -> np.ndarray:
        """Per-constraint distance outside the tolerance band."""
        return np.array([
            max(0.0, abs(expectation(rho, c.observable) - c.value) - c.tolerance) for c in self.constraints
        ])

    def residual(self, rho) -> float:
        return float(self.excesses(rho).max(initial=0.0))


def constraints_from_state(rho, observables: Iterable, tolerance: float = 0.0,
                           dims: Sequence[int] | None = None) -> ConstraintSet:
    """Constraints holding the exact expectation values of ``rho``."""
    R = as_density(rho, dims)
    cons = []
    for A in observables:
        A = as_observable(A)
        cons.append(Constraint(A, expectation(R, A), tolerance))
    return ConstraintSet(R.dims, tuple(cons))


def cat_constraints() -> ConstraintSet:
    """What the box reveals: perfectly correlated cat/nucleus, each half-half."""
    return ConstraintSet((2, 2), (Constraint("ZZ", 1.0), Constraint("ZI", 0.0), Constraint("IZ", 0.0)))


def cat_family(x: complex) -> DensityMatrix:
    """States compatible with :func:`cat_constraints`: ``diag(1/2,0,0,1/2)`` plus a corner coherence.

    ``x`` sits at row 3, column 0 (0-based), its conjugate at (0, 3).  Positivity
    requires ``|x| <= 1/2``.
    """
    x = complex(x)
    if abs(x) > 0.5 + 1e-12:
        raise PositivityError(f"|x| = {abs(x):.6g} violates 1/4 - |x|^2 >= 0")
    M = np.diag([0.5, 0, 0, 0.5]).astype(complex)
    M[3, 0] = x
    M[0, 3] = x.conjugate()
    return DensityMatrix(M, (2, 2))


def forced_zeros(diagonal, tol: float = 1e-12) -> frozenset[tuple[int, int]]:
    """Off-diagonal positions that positivity forces to vanish.

    A PSD matrix with a zero diagonal entry has the whole row and column zero
    (its 2x2 principal minors would otherwise be negative).  Positions are
    0-based ``(row, col)`` pairs.
    """
    p = np.asarray(diagonal, dtype=float)
    if p.ndim != 1 or np.any(p < -tol) or abs(p.sum() - 1.0) > 1e-9:
        raise ValidationError("diagonal must be a non-negative probability vector")
    zero = np.flatnonzero(p <= tol)
    n = p.size
    return frozenset((i, j) for i in range(n) for j in range(n) if i != j and (i in zero or j in zero))


def free_entries(diagonal, tol: float = 1e-12) -> frozenset[tuple[int, int]]:
    """Off-diagonal positions left undetermined by the diagonal."""
    n = len(diagonal)
    forced = forced_zeros(diagonal, tol)
    return frozenset((i, j) for i in range(n) for j in range(n) if i != j and (i, j) not in forced)


@dataclass(frozen=True)
class OptimizerOptions:
    restarts: int = 16
    seed: int = 0
    stages: int = 6
    penalty_start: float = 10.0
    penalty_max: float = 1e6
    polish_step: float = 1e-3
    step_floor: float = 1e-7
    polish_polls: int = 60
    max_iter: int = 2000
    workers: int = 1

    def search_kwargs(self) -> dict:
        return {
            "stages": self.stages, "penalty_start": self.penalty_start, "penalty_max": self.penalty_max,
            "polish_step": self.polish_step, "step_floor": self.step_floor,
            "polish_polls": self.polish_polls, "max_iter": self.max_iter,
        }


@dataclass(frozen=True, eq=False)
class NegativityBound:
    """Outcome of a negativity search over the compatible set.

    For a minimization ``value`` is an upper bound on the true minimum; for a
    maximization it is a lower bound on the true maximum.
    """

    value: float
    witness: DensityMatrix
    residual: float
    restart_values: tuple[float, ...] = ()
    restart_residuals: tuple[float, ...] = ()
    source: str = "optimizer"

    @property
    def feasible_values(self) -> tuple[float, ...]:
        return tuple(v for v, r in zip(self.restart_values, self.restart_residuals) if r <= FEASIBLE_RESIDUAL)


def _problem(cs: ConstraintSet, sign: float) -> SearchProblem:
    if len(cs.dims) != 2:
        raise DimensionError(f"negativity search needs a bipartite system, got dims {cs.dims}")
    d = int(np.prod(cs.dims))
    if d > MAX_OPTIMIZER_DIM:
        raise DimensionError(f"negativity search supports total dimension <= {MAX_OPTIMIZER_DIM}, got {d}")
    ops = np.array([c.observable.matrix for c in cs]) if len(cs) else np.zeros((0, d, d), dtype=complex)
    vals = np.array([c.value for c in cs])
    tols = np.array([c.tolerance for c in cs])
    return SearchProblem(cs.dims, ops, vals, tols, sign)


def _bound(cs: ConstraintSet, opts: OptimizerOptions | None, sign: float) -> NegativityBound:
    opts = opts or OptimizerOptions()
    problem = _problem(cs, sign)
    results = run_search(problem, opts.restarts, opts.seed, workers=opts.workers, **opts.search_kwargs())
    feasible = [r for r in results if r.residual <= FEASIBLE_RESIDUAL]
    if feasible:
        best = min(feasible, key=lambda r: (sign * r.negativity, r.residual, r.ordinal))
    else:
        best = min(results, key=lambda r: (r.residual, sign * r.negativity, r.ordinal))
    if best.residual > INFEASIBLE_RESIDUAL:
        raise InfeasibleConstraintsError(
            f"no compatible state found: best constraint violation {best.residual:.3e} after {len(results)} restarts"
        )
    R = problem.state(best.params)
    witness = DensityMatrix(0.5 * (R + R.conj().T), cs.dims)
    return NegativityBound(
        value=negativity(witness),
        witness=witness,
        residual=cs.residual(witness),
        restart_values=tuple(r.negativity for r in results),
        restart_residuals=tuple(r.residual for r in results),
    )


def min_negativity(cs: ConstraintSet, opts: OptimizerOptions | None = None) -> NegativityBound:
    """Smallest negativity found among states satisfying ``cs``."""
    return _bound(cs, opts, +1.0)


def max_negativity(cs: ConstraintSet, opts: OptimizerOptions | None = None) -> NegativityBound:
    """Largest negativity found among states satisfying ``cs``."""
    return _bound(cs, opts, -1.0)


def _diagonal_feasible(cs: ConstraintSet, U: np.ndarray) -> np.ndarray | None:
    """Probability vector ``p`` with ``U diag(p) U^dag`` satisfying ``cs``.

    Among feasible vectors the one maximizing its smallest entry is chosen,
    which gives the maximally mixed state when nothing is constrained.
    """
    d = U.shape[0]
    rows = [np.real(np.diag(U.conj().T @ c.observable.matrix @ U)) for c in cs]
    # variables: p_0 .. p_{d-1}, t ; maximize t subject to p_k >= t
    c_obj = np.zeros(d + 1)
    c_obj[-1] = -1.0
    A_ub, b_ub, A_eq, b_eq = [], [], [np.r_[np.ones(d), 0.0]], [1.0]
    for k in range(d):
        row = np.zeros(d + 1)
        row[k], row[-1] = -1.0, 1.0
        A_ub.append(row)
        b_ub.append(0.0)
    for r, c in zip(rows, cs):
        if c.tolerance == 0:
            A_eq.append(np.r_[r, 0.0])
            b_eq.append(c.value)
        else:
            A_ub.append(np.r_[r, 0.0])
            b_ub.append(c.value + c.tolerance)
            A_ub.append(np.r_[-r, 0.0])
            b_ub.append(-(c.value - c.tolerance))
    res = linprog(c_obj, A_ub=np.array(A_ub), b_ub=np.array(b_ub), A_eq=np.array(A_eq), b_eq=np.array(b_eq),
                  bounds=[(0, 1)] * (d + 1), method="highs")
    if res.status != 0:
        return None
    p = np.clip(res.x[:d], 0.0, None)
    return p / p.sum()


def classical_certificate(cs: ConstraintSet, basis: BasisAnalysis | None = None) -> DensityMatrix | None:
    """A separable state reproducing ``cs``, when all observables share a product eigenbasis.

    The state is diagonal in that basis, hence a mixture of product states.
    Returns ``None`` when no common product eigenbasis is established.
    """
    if basis is None:
        basis = common_product_eigenbasis(cs.observables, cs.dims)
    if basis.kind is not BasisKind.PRODUCT:
        return None
    U = basis.basis
    p = _diagonal_feasible(cs, U)
    if p is None:
        raise InfeasibleConstraintsError("no state diagonal in the common eigenbasis satisfies the constraints")
    M = (U * p) @ U.conj().T
    cert = DensityMatrix(0.5 * (M + M.conj().T), cs.dims)
    if cs.residual(cert) > FEASIBLE_RESIDUAL:
        raise InfeasibleConstraintsError(f"certificate violates constraints by {cs.residual(cert):.3e}")
    return cert


class Verdict(enum.Enum):
    EVIDENCE = "EvidenceOfEntanglement"
    NO_EVIDENCE = "NoEvidence"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class EvidenceVerdict:
    verdict: Verdict
    min_negativity: NegativityBound
    max_negativity: NegativityBound
    certificate: DensityMatrix | None
    basis: BasisAnalysis
    diagnostics: dict = field(default_factory=dict)


def assess(cs: ConstraintSet, opts: OptimizerOptions | None = None) -> EvidenceVerdict:
    """Decide whether the constraints evidence entanglement.

    ``NoEvidence`` comes with a separable certificate whenever one is found.
    ``EvidenceOfEntanglement`` needs the best minimum above ``TOL_NEG`` and
    every feasible restart above ``EVIDENCE_MARGIN * TOL_NEG``.  Anything
    else, including marginal feasibility, is ``Inconclusive``.
    """
    opts = opts or OptimizerOptions()
    basis = common_product_eigenbasis(cs.observables, cs.dims)
    cert = classical_certificate(cs, basis)
    if cert is not None:
        low = NegativityBound(negativity(cert), cert, cs.residual(cert), source="certificate")
    else:
        low = min_negativity(cs, opts)
    high = max_negativity(cs, opts)

    certificate = cert
    if cert is not None:
        verdict = Verdict.NO_EVIDENCE
    elif low.residual > FEASIBLE_RESIDUAL:
        verdict = Verdict.INCONCLUSIVE
    elif low.value <= TOL_NEG:
        verdict = Verdict.NO_EVIDENCE
        if low.value < CERTIFICATE_NEGATIVITY and cs.dims in PPT_CONCLUSIVE_DIMS:
            certificate = low.witness
    elif low.feasible_values and min(low.feasible_values) > EVIDENCE_MARGIN * TOL_NEG:
        verdict = Verdict.EVIDENCE
    else:
        verdict = Verdict.INCONCLUSIVE

    diagnostics = {
        "restarts": opts.restarts,
        "seed": opts.seed,
        "basis_analysis": basis.kind.value,
        "basis_reason": basis.reason,
        "min_source": low.source,
        "min_residual": low.residual,
        "max_residual": high.residual,
        "feasible_min_restarts": len(low.feasible_values) if low.source == "optimizer" else None,
    }
    return EvidenceVerdict(verdict, low, high, certificate, basis, diagnostics)


__all__ = [
    "Constraint", "ConstraintSet", "constraints_from_state", "cat_constraints", "cat_family",
    "forced_zeros", "free_entries", "OptimizerOptions", "NegativityBound", "min_negativity",
    "max_negativity", "classical_certificate", "Verdict", "EvidenceVerdict", "assess",
    "TOL_NEG",
]
