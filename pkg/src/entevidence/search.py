"""Penalized search for extreme negativity over density matrices.

States are parameterized as ``rho = G G^dag / Tr(G G^dag)`` with ``G`` a full
complex ``d x d`` factor, so every point is a valid density matrix and the
problem becomes unconstrained.  Constraints enter through an exterior penalty
``penalty * sum(excess_i ** 2)``, where ``excess_i`` is how far
``Tr(rho A_i)`` lies outside its tolerance band; the penalty is ramped
geometrically over the stages.

Each stage runs L-BFGS on the exact (sub)gradient, and a compass search at the
final penalty polishes the point, since negativity has kinks where partial
transpose eigenvalues cross zero.

For maximization the objective is ``-N(rho) + max(0, lambda_min(rho^PT))``:
it equals ``-N`` wherever the state is NPT and still slopes toward the PPT
boundary inside the PPT region, where ``-N`` alone is flat.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import rng as _rng


@dataclass(frozen=True)
class SearchProblem:
    dims: tuple[int, int]
    operators: np.ndarray  # (k, d, d)
    values: np.ndarray  # (k,)
    tolerances: np.ndarray  # (k,)
    sign: float  # +1 minimizes negativity, -1 maximizes it

    @property
    def d(self) -> int:
        return self.dims[0] * self.dims[1]

    def _pt(self, R: np.ndarray) -> np.ndarray:
        dA, dB = self.dims
        lead = R.shape[:-2]
        T = R.reshape(*lead, dA, dB, dA, dB)
        k = len(lead)
        axes = list(range(k)) + [k, k + 3, k + 2, k + 1]
        return T.transpose(axes).reshape(*lead, self.d, self.d)

    def state(self, x: np.ndarray) -> np.ndarray:
        d = self.d
        G = (x[..., : d * d] + 1j * x[..., d * d:]).reshape(*x.shape[:-1], d, d)
        R = G @ np.swapaxes(G.conj(), -1, -2)
        tr = np.trace(R, axis1=-2, axis2=-1).real
        return R / tr[..., None, None]

    def _excess(self, R: np.ndarray):
        if not len(self.values):
            z = np.zeros(R.shape[:-2] + (0,))
            return z, z
        ex = np.einsum("...ij,kji->...k", R, self.operators).real
        diff = ex - self.values
        return np.clip(np.abs(diff) - self.tolerances, 0.0, None), diff

    def measure(self, x: np.ndarray) -> tuple[float, float]:
        """Negativity and largest constraint excess at ``x``."""
        R = self.state(x)
        w = np.linalg.eigvalsh(self._pt(R))
        excess, _ = self._excess(R)
        return float(np.clip(-w, 0.0, None).sum()), float(excess.max(initial=0.0))

    def objective(self, X: np.ndarray, penalty: float) -> np.ndarray:
        """Batched objective over parameter rows."""
        R = self.state(X)
        w = np.linalg.eigvalsh(self._pt(R))
        neg = np.clip(-w, 0.0, None).sum(axis=-1)
        shape = neg if self.sign > 0 else -neg + np.clip(w[..., 0], 0.0, None)
        excess, _ = self._excess(R)
        return shape + penalty * np.sum(excess**2, axis=-1)

    def value_and_grad(self, x: np.ndarray, penalty: float) -> tuple[float, np.ndarray]:
        d = self.d
        G = (x[: d * d] + 1j * x[d * d:]).reshape(d, d)
        R = G @ G.conj().T
        t = np.trace(R).real
        R = R / t
        w, V = np.linalg.eigh(self._pt(R))
        neg = w < 0
        Vn = V[:, neg]
        f = -float(w[neg].sum())
        F = -self._pt(Vn @ Vn.conj().T)
        if self.sign < 0:
            f, F = -f, -F
            if w[0] > 0:
                v = V[:, :1]
                f += float(w[0])
                F = F + self._pt(v @ v.conj().T)
        excess, diff = self._excess(R)
        if excess.size:
            f += penalty * float(np.sum(excess**2))
            F = F + np.einsum("k,kij->ij", 2 * penalty * excess * np.sign(diff), self.operators)
        # chain rule through rho = G G^dag / t
        c = np.trace(F @ R).real
        B = (G.conj().T @ (F - c * np.eye(d))).T
        grad = np.concatenate([(2 / t) * B.real.ravel(), (-2 / t) * B.imag.ravel()])
        return f, grad


@dataclass(frozen=True)
class RestartResult:
    ordinal: int
    params: np.ndarray
    negativity: float
    residual: float
    objective: float
    iterations: int


def _compass(problem: SearchProblem, x: np.ndarray, penalty: float, step: float,
             step_floor: float, max_polls: int) -> tuple[np.ndarray, int]:
    n = x.size
    E = np.vstack([np.eye(n), -np.eye(n)])
    fx = problem.objective(x[None], penalty)[0]
    polls = 0
    while step >= step_floor and polls < max_polls:
        cand = x + step * E
        fc = problem.objective(cand, penalty)
        gains = fc.reshape(2, n) - fx
        # combined exploratory move over every improving coordinate
        best_dir = np.where(gains[0] <= gains[1], 1.0, -1.0)
        improving = np.minimum(gains[0], gains[1]) < 0
        combo = x + step * np.where(improving, best_dir, 0.0)
        fcombo = problem.objective(combo[None], penalty)[0]
        polls += 1
        j = int(np.argmin(fc))
        if min(fc[j], fcombo) < fx:
            x, fx = (combo, fcombo) if fcombo <= fc[j] else (cand[j], fc[j])
            x = x / np.linalg.norm(x)
        else:
            step *= 0.5
    return x, polls


def run_restart(problem: SearchProblem, ordinal: int, seed: int, stages: int = 6,
                penalty_start: float = 10.0, penalty_max: float = 1e6,
                polish_step: float = 1e-3, step_floor: float = 1e-7,
                polish_polls: int = 60, max_iter: int = 2000) -> RestartResult:
    gen = _rng.stream(seed, ordinal)
    x = gen.normal(size=2 * problem.d**2)
    x /= np.linalg.norm(x)
    penalties = np.geomspace(penalty_start, penalty_max, stages) if stages > 1 else np.array([penalty_max])
    iterations = 0
    for penalty in penalties:
        res = minimize(problem.value_and_grad, x, args=(penalty,), jac=True, method="L-BFGS-B",
                       options={"maxiter": max_iter, "ftol": 1e-15, "gtol": 1e-12})
        x = res.x / np.linalg.norm(res.x)
        iterations += int(res.nit)
    if polish_polls > 0:
        x, polls = _compass(problem, x, penalties[-1], polish_step, step_floor, polish_polls)
        iterations += polls
    neg, residual = problem.measure(x)
    return RestartResult(ordinal, x, neg, residual,
                         float(problem.objective(x[None], penalties[-1])[0]), iterations)


def run_search(problem: SearchProblem, restarts: int, seed: int, workers: int = 1, **kw) -> list[RestartResult]:
    """All restarts, ordered by ordinal regardless of execution order.

    Restart ``r`` draws its starting point from stream ``(seed, r)``, so the
    result does not depend on ``workers``.
    """
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(run_restart, problem, r, seed, **kw) for r in range(restarts)]
            return [f.result() for f in futs]
    return [run_restart(problem, r, seed, **kw) for r in range(restarts)]
