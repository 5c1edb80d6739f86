"""Scenario documents, the built-in experiments, and the scenario runner.

A scenario is a JSON object (schema version ``"1"``)::

    {
      "version": "1",
      "name": "cat",
      "dims": [2, 2],
      "source_state": {"constructor": "cat_pure", "params": {"phi": 0.0}},
      "constraints": [{"observable": "ZZ", "value": 1.0, "tolerance": 0.0}],
      "simulations": [{"basis": "ZZ", "shots": 100000, "seed": 1}],
      "tomography": {"settings": "pauli", "shots": 20000, "seed": 2, "mode": "full"},
      "optimizer": {"restarts": 16, "seed": 0},
      "tasks": ["simulate", "assess"]
    }

``source_state`` is a named constructor, an explicit ``{"matrix": {"re", "im"}}``
or ``{"vector": {"re", "im"}}``, optionally with ``"keep"`` to trace out the
other subsystems.  A constraint may omit ``value`` (taken from the source
state), give an explicit ``{"re", "im"}`` observable with a ``label``, or use
``{"pauli_set": "full"}`` for all non-identity Pauli strings.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import entanglement, states, tensor
from .errors import EntEvidenceError, InconclusiveError, ScenarioParseError
from .evidence import Constraint, ConstraintSet, OptimizerOptions, assess
from .observables import Observable, basis_measurement, born_distribution, pauli, pauli_labels, pauli_setting, sample_outcomes
from .report import Report, matrix_from_json, matrix_to_json
from .tomography import PAULI_SETTINGS, tomography_two_qubit

SCENARIO_VERSION = "1"
TASKS = ("reduce", "simulate", "assess", "tomography")

CONSTRUCTORS = {
    "cat_pure": lambda phi=0.0, p=0.5: states.cat_pure(phi, p),
    "cat_mixed": states.cat_mixed,
    "phi_plus": states.phi_plus,
    "ghz": states.ghz,
    "beam_splitter_photon": states.beam_splitter_photon,
    "maximally_mixed": lambda dims=(2, 2): states.maximally_mixed(dims),
    "basis_state": lambda index=0, dims=(2, 2): states.basis_state(index, dims),
    "cat_family": lambda x_re=0.0, x_im=0.0: _cat_family(complex(x_re, x_im)),
}


def _cat_family(x):
    from .evidence import cat_family

    return cat_family(x)


def ghz_reduction(keep=(0, 1)) -> states.DensityMatrix:
    """Two-party state left after tracing the third GHZ qubit."""
    rho = states.pure_density(states.ghz())
    return states.DensityMatrix(tensor.partial_trace(rho.matrix, rho.dims, keep), (2, 2))


def simulate_cat_experiment(variant: str = "mixed", phi: float = 0.0, shots: int = 1_000_000,
                            seed: int = 0, stream: int = 0) -> dict[str, int]:
    """Open the box ``shots`` times and tabulate the four cat/nucleus outcomes."""
    if variant == "mixed":
        rho = states.cat_mixed()
    elif variant == "pure":
        rho = states.pure_density(states.cat_pure(phi))
    else:
        raise ValueError(f"variant must be 'pure' or 'mixed', got {variant!r}")
    meas = basis_measurement(np.eye(4), states.CAT_LABELS, product=True, label="cat/nucleus")
    counts = sample_outcomes(rho, meas, shots, seed, stream)
    return {meas.label_for(v): c for v, c in counts.items()}


@dataclass(frozen=True)
class SimulationSpec:
    basis: str
    shots: int
    seed: int
    labels: tuple[str, ...] | None = None


@dataclass(frozen=True)
class TomographySpec:
    settings: tuple[str, ...]
    shots: int
    seed: int
    mode: str = "full"


@dataclass(frozen=True)
class Scenario:
    name: str
    dims: tuple[int, ...]
    source_state: dict | None = None
    constraints: tuple[dict, ...] = ()
    simulations: tuple[SimulationSpec, ...] = ()
    tomography: TomographySpec | None = None
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    tasks: tuple[str, ...] = ("assess",)
    description: str = ""

    def with_overrides(self, seed: int | None = None, shots: int | None = None,
                       restarts: int | None = None) -> "Scenario":
        sims, tomo, opt = self.simulations, self.tomography, self.optimizer
        if seed is not None:
            sims = tuple(replace(s, seed=seed) for s in sims)
            tomo = replace(tomo, seed=seed) if tomo else None
            opt = replace(opt, seed=seed)
        if shots is not None:
            sims = tuple(replace(s, shots=shots) for s in sims)
            tomo = replace(tomo, shots=shots) if tomo else None
        if restarts is not None:
            opt = replace(opt, restarts=restarts)
        return replace(self, simulations=sims, tomography=tomo, optimizer=opt)


# ---------------------------------------------------------------- parsing

def _fail(msg, ctx):
    raise ScenarioParseError(msg, context=ctx)


def _int(value, ctx, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"expected an integer, got {value!r}", ctx)
    if minimum is not None and value < minimum:
        _fail(f"must be at least {minimum}, got {value}", ctx)
    return value


def _num(value, ctx):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"expected a number, got {value!r}", ctx)
    return float(value)


def _check_grid(obj, ctx, ndim):
    if not isinstance(obj, dict) or "re" not in obj:
        _fail("expected an object with 're' (and optional 'im') component grids", ctx)
    try:
        M = matrix_from_json(obj)
    except (TypeError, ValueError) as exc:
        _fail(f"bad component grid: {exc}", ctx)
    if M.ndim != ndim:
        _fail(f"expected a {ndim}-d grid, got shape {M.shape}", ctx)
    return M


def _parse_source(src, ctx):
    if not isinstance(src, dict):
        _fail("expected an object", ctx)
    kinds = [k for k in ("constructor", "matrix", "vector") if k in src]
    if len(kinds) != 1:
        _fail("give exactly one of 'constructor', 'matrix', 'vector'", ctx)
    if "constructor" in src:
        if src["constructor"] not in CONSTRUCTORS:
            _fail(f"unknown constructor {src['constructor']!r}; known: {', '.join(sorted(CONSTRUCTORS))}", f"{ctx}.constructor")
        if not isinstance(src.get("params", {}), dict):
            _fail("expected an object", f"{ctx}.params")
    elif "matrix" in src:
        _check_grid(src["matrix"], f"{ctx}.matrix", 2)
    else:
        _check_grid(src["vector"], f"{ctx}.vector", 1)
    if "keep" in src and (not isinstance(src["keep"], list) or not src["keep"]):
        _fail("expected a non-empty list of subsystem indices", f"{ctx}.keep")
    return copy.deepcopy(src)


def _parse_constraint(c, ctx, n_qubits):
    if not isinstance(c, dict):
        _fail("expected an object", ctx)
    if "pauli_set" in c:
        if c["pauli_set"] != "full":
            _fail("only 'full' is supported", f"{ctx}.pauli_set")
        if n_qubits is None:
            _fail("Pauli constraints need qubit dims", ctx)
        return copy.deepcopy(c)
    if "observable" not in c:
        _fail("missing 'observable'", ctx)
    obs = c["observable"]
    if isinstance(obs, str):
        try:
            p = pauli(obs)
        except EntEvidenceError as exc:
            _fail(str(exc), f"{ctx}.observable")
        if n_qubits is None or p.dim != 2**n_qubits:
            _fail(f"Pauli string {obs!r} does not match the scenario dims", f"{ctx}.observable")
    else:
        _check_grid(obs, f"{ctx}.observable", 2)
    if "value" in c:
        _num(c["value"], f"{ctx}.value")
    if "tolerance" in c and _num(c["tolerance"], f"{ctx}.tolerance") < 0:
        _fail("must be non-negative", f"{ctx}.tolerance")
    return copy.deepcopy(c)


def parse_scenario(data: dict) -> Scenario:
    """Validate a decoded scenario document."""
    if not isinstance(data, dict):
        _fail("scenario must be a JSON object", "$")
    version = data.get("version", SCENARIO_VERSION)
    if str(version) != SCENARIO_VERSION:
        _fail(f"unsupported scenario version {version!r}", "version")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        _fail("missing scenario name", "name")
    dims = data.get("dims")
    if not isinstance(dims, list) or not dims:
        _fail("expected a list of subsystem dimensions", "dims")
    dims = tuple(_int(d, f"dims[{i}]", 1) for i, d in enumerate(dims))
    n_qubits = len(dims) if all(d == 2 for d in dims) else None

    src = _parse_source(data["source_state"], "source_state") if data.get("source_state") is not None else None

    raw_cons = data.get("constraints", [])
    if not isinstance(raw_cons, list):
        _fail("expected a list", "constraints")
    cons = tuple(_parse_constraint(c, f"constraints[{i}]", n_qubits) for i, c in enumerate(raw_cons))
    if src is None and any("pauli_set" in c or "value" not in c for c in cons):
        _fail("constraint values can only be omitted when a source_state is given", "constraints")

    sims = []
    raw_sims = data.get("simulations", [])
    if not isinstance(raw_sims, list):
        _fail("expected a list", "simulations")
    for i, s in enumerate(raw_sims):
        ctx = f"simulations[{i}]"
        if not isinstance(s, dict):
            _fail("expected an object", ctx)
        basis = s.get("basis", "Z" * len(dims))
        if not isinstance(basis, str) or n_qubits is None or len(basis) != n_qubits or any(ch not in "XYZ" for ch in basis.upper()):
            _fail(f"basis must be one X/Y/Z letter per qubit, got {basis!r}", f"{ctx}.basis")
        labels = s.get("labels")
        if labels is not None and (not isinstance(labels, list) or len(labels) != 2**n_qubits):
            _fail(f"expected {2 ** n_qubits} outcome labels", f"{ctx}.labels")
        sims.append(SimulationSpec(basis.upper(), _int(s.get("shots", 10_000), f"{ctx}.shots", 1),
                                   _int(s.get("seed", 0), f"{ctx}.seed", 0),
                                   tuple(str(x) for x in labels) if labels else None))

    tomo = None
    if data.get("tomography") is not None:
        t = data["tomography"]
        if not isinstance(t, dict):
            _fail("expected an object", "tomography")
        settings = t.get("settings", "pauli")
        if settings == "pauli":
            settings = list(PAULI_SETTINGS)
        elif settings == "computational":
            settings = ["ZZ"]
        if not isinstance(settings, list) or not all(isinstance(x, str) for x in settings):
            _fail("expected 'pauli', 'computational' or a list of settings", "tomography.settings")
        mode = t.get("mode", "full")
        if mode not in ("full", "partial"):
            _fail("expected 'full' or 'partial'", "tomography.mode")
        tomo = TomographySpec(tuple(s.upper() for s in settings), _int(t.get("shots", 10_000), "tomography.shots", 1),
                              _int(t.get("seed", 0), "tomography.seed", 0), mode)

    opt = OptimizerOptions()
    if data.get("optimizer") is not None:
        o = data["optimizer"]
        if not isinstance(o, dict):
            _fail("expected an object", "optimizer")
        known = set(OptimizerOptions.__dataclass_fields__)
        unknown = set(o) - known
        if unknown:
            _fail(f"unknown optimizer options {sorted(unknown)}", "optimizer")
        opt = replace(opt, **o)
        _int(opt.restarts, "optimizer.restarts", 1)

    tasks = data.get("tasks", ["assess"])
    if not isinstance(tasks, list) or not tasks:
        _fail("expected a non-empty list", "tasks")
    for i, t in enumerate(tasks):
        if t not in TASKS:
            _fail(f"unknown task {t!r}; choose from {', '.join(TASKS)}", f"tasks[{i}]")
    if any(t in ("reduce", "tomography", "simulate") for t in tasks) and src is None:
        _fail("tasks reduce/simulate/tomography need a source_state", "tasks")
    if "tomography" in tasks and tomo is None:
        _fail("task 'tomography' needs a 'tomography' block", "tomography")
    if "simulate" in tasks and not sims:
        _fail("task 'simulate' needs at least one simulation", "simulations")

    return Scenario(name, dims, src, cons, tuple(sims), tomo, opt, tuple(tasks), str(data.get("description", "")))


def loads_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, context=f"column {exc.colno}", line=exc.lineno) from None
    return parse_scenario(data)


def load_scenario(path) -> Scenario:
    return loads_scenario(Path(path).read_text())


# ---------------------------------------------------------------- built-ins

def _cat_doc():
    return {
        "version": "1", "name": "cat",
        "description": "Cat and nucleus seen only through the dead/alive and decayed/intact measurement.",
        "dims": [2, 2],
        "source_state": {"constructor": "cat_pure", "params": {"phi": 0.0}},
        "constraints": [{"observable": "ZZ", "value": 1.0}, {"observable": "ZI", "value": 0.0},
                        {"observable": "IZ", "value": 0.0}],
        "simulations": [{"basis": "ZZ", "shots": 100_000, "seed": 1, "labels": list(states.CAT_LABELS)}],
        "tasks": ["simulate", "assess"],
    }


def _neutrino_doc():
    return {
        "version": "1", "name": "cat-neutrino",
        "description": "Cat, nucleus and antineutrino; the antineutrino is traced out.",
        "dims": [2, 2],
        "source_state": {"constructor": "ghz", "keep": [0, 1]},
        "constraints": [{"observable": "ZZ"}, {"observable": "ZI"}, {"observable": "IZ"}],
        "simulations": [{"basis": "ZZ", "shots": 100_000, "seed": 1, "labels": list(states.CAT_LABELS)}],
        "tasks": ["reduce", "simulate", "assess"],
    }


def _ghz_reduction_doc():
    return {
        "version": "1", "name": "ghz-reduction",
        "description": "Alice and Bob's share of a GHZ state whose third qubit is held by Eve.",
        "dims": [2, 2],
        "source_state": {"constructor": "ghz", "keep": [0, 1]},
        "tasks": ["reduce"],
    }


def _crypto_doc(name, source, description):
    return {
        "version": "1", "name": name, "description": description,
        "dims": [2, 2],
        "source_state": source,
        "constraints": [{"pauli_set": "full"}],
        "simulations": [{"basis": "ZZ", "shots": 100_000, "seed": 1, "labels": ["00", "01", "10", "11"]}],
        "tomography": {"settings": "pauli", "shots": 20_000, "seed": 2, "mode": "full"},
        "tasks": ["reduce", "simulate", "assess", "tomography"],
    }


def _beam_splitter_doc():
    return {
        "version": "1", "name": "beam-splitter",
        "description": "One photon after a 50:50 beam splitter; modes truncated to 0 or 1 photons.",
        "dims": [2, 2],
        "source_state": {"constructor": "beam_splitter_photon"},
        "constraints": [{"pauli_set": "full"}],
        "tasks": ["reduce", "assess"],
    }


BUILTIN_DOCUMENTS = {
    "cat": _cat_doc,
    "cat-neutrino": _neutrino_doc,
    "ghz-reduction": _ghz_reduction_doc,
    "crypto-phi-plus": lambda: _crypto_doc(
        "crypto-phi-plus", {"constructor": "phi_plus"}, "Alice and Bob share a Bell pair."),
    "crypto-ghz-eve": lambda: _crypto_doc(
        "crypto-ghz-eve", {"constructor": "ghz", "keep": [0, 1]},
        "Alice and Bob hold two qubits of a GHZ state; Eve keeps the third."),
    "beam-splitter": _beam_splitter_doc,
}


def builtin_document(name: str) -> dict:
    try:
        return BUILTIN_DOCUMENTS[name]()
    except KeyError:
        raise ScenarioParseError(f"unknown built-in scenario {name!r}; try: {', '.join(BUILTIN_DOCUMENTS)}") from None


def builtin(name: str) -> Scenario:
    return parse_scenario(builtin_document(name))


def list_builtins() -> list[tuple[str, str]]:
    return [(name, doc()["description"]) for name, doc in BUILTIN_DOCUMENTS.items()]


# ---------------------------------------------------------------- running

def resolve_source(src: dict, default_dims=None):
    """Build the source state; returns ``(state, source_dims, keep)``.

    Explicit matrices and vectors take ``src["dims"]`` if given, otherwise
    ``default_dims``.
    """
    if "constructor" in src:
        params = dict(src.get("params", {}))
        try:
            obj = CONSTRUCTORS[src["constructor"]](**params)
        except TypeError as exc:
            raise ScenarioParseError(str(exc), context="source_state.params") from None
        rho = states.as_density(obj)
    elif "matrix" in src:
        M = matrix_from_json(src["matrix"])
        rho = states.density_matrix(M, src.get("dims", default_dims))
    else:
        v = matrix_from_json(src["vector"])
        rho = states.pure_density(states.state_vector(v, src.get("dims", default_dims)))
    keep = src.get("keep")
    if keep is None:
        return rho, rho.dims, None
    kept_dims = tuple(rho.dims[k] for k in sorted(keep))
    reduced = states.DensityMatrix(tensor.partial_trace(rho.matrix, rho.dims, keep), kept_dims)
    return reduced, rho.dims, sorted(keep)


def resolve_constraints(scenario: Scenario, rho=None) -> ConstraintSet:
    from .observables import expectation

    cons = []
    for i, c in enumerate(scenario.constraints):
        tol = float(c.get("tolerance", 0.0))
        if "pauli_set" in c:
            for label in pauli_labels(len(scenario.dims)):
                cons.append(Constraint(pauli(label), expectation(rho, label), tol))
            continue
        obs = c["observable"]
        A = pauli(obs) if isinstance(obs, str) else Observable(matrix_from_json(obs), label=c.get("label", f"A{i}"))
        value = c["value"] if "value" in c else expectation(rho, A)
        cons.append(Constraint(A, value, tol))
    return ConstraintSet(scenario.dims, tuple(cons))


def _describe_state(rho, src_dims, keep) -> dict:
    out = {
        "task": "reduce",
        "source_dims": list(src_dims),
        "keep": keep,
        "state": matrix_to_json(rho.matrix),
        "purity": states.purity(rho),
    }
    if len(rho.dims) == 2:
        out["negativity"] = entanglement.negativity(rho)
        out["pt_spectrum"] = entanglement.pt_spectrum(rho).tolist()
        try:
            out["ppt_verdict"] = entanglement.ppt_verdict(rho).value
        except InconclusiveError:
            out["ppt_verdict"] = "Inconclusive"
        if abs(out["purity"] - 1.0) < 1e-9:
            _, V = tensor.hermitian_eigs(rho.matrix)
            out["schmidt_coefficients"] = entanglement.schmidt_coefficients(V[:, -1], rho.dims).tolist()
        else:
            out["schmidt_coefficients"] = None
    return out


def _bound_json(b) -> dict:
    return {
        "value": b.value, "residual": b.residual, "source": b.source,
        "restart_values": list(b.restart_values), "restart_residuals": list(b.restart_residuals),
        "witness": matrix_to_json(b.witness.matrix),
    }


def _assess_json(cs: ConstraintSet, opts: OptimizerOptions) -> dict:
    v = assess(cs, opts)
    return {
        "task": "assess",
        "verdict": v.verdict.value,
        "constraints": [
            {"observable": c.observable.label, "value": c.value, "tolerance": c.tolerance} for c in cs
        ],
        "basis_analysis": v.basis.kind.value,
        "basis_reason": v.basis.reason,
        "min_negativity": _bound_json(v.min_negativity),
        "max_negativity": _bound_json(v.max_negativity),
        "certificate": matrix_to_json(v.certificate.matrix) if v.certificate is not None else None,
        "diagnostics": v.diagnostics,
    }


def _simulate_json(rho, sims) -> dict:
    runs = []
    for k, s in enumerate(sims):
        meas = pauli_setting(s.basis)
        if s.labels:
            meas = basis_measurement(meas.declared_eigenbasis, s.labels, product=True, label=s.basis)
        probs = born_distribution(rho, meas)
        counts = sample_outcomes(rho, meas, s.shots, s.seed, stream=k)
        runs.append({
            "basis": s.basis, "shots": s.shots, "seed": s.seed, "stream": k,
            "counts": {meas.label_for(v): c for v, c in counts.items()},
            "frequencies": {meas.label_for(v): c / s.shots for v, c in counts.items()},
            "probabilities": {meas.label_for(v): p for v, p in probs.items()},
        })
    return {"task": "simulate", "runs": runs}


def _tomography_json(rho, spec: TomographySpec) -> dict:
    res = tomography_two_qubit(rho, spec.settings, spec.shots, spec.seed, spec.mode)
    return {
        "task": "tomography",
        "settings": list(spec.settings), "shots_per_setting": spec.shots, "seed": spec.seed, "mode": spec.mode,
        "tables": res.tables,
        "expectations": res.expectations,
        "estimate": matrix_to_json(res.estimate.matrix),
        "negativity": entanglement.negativity(res.estimate),
        "trace_distance_to_source": states.trace_distance(res.estimate, rho),
    }


def run_scenario(scenario: Scenario) -> Report:
    """Execute the scenario's tasks in order.  Deterministic given its seeds."""
    rho, src_dims, keep = (None, None, None)
    if scenario.source_state is not None:
        rho, src_dims, keep = resolve_source(scenario.source_state, scenario.dims)
        if tuple(rho.dims) != tuple(scenario.dims):
            raise ScenarioParseError(f"source state has dims {rho.dims}, scenario declares {scenario.dims}",
                                     context="source_state")
    seeds = {"optimizer": scenario.optimizer.seed}
    if scenario.simulations:
        seeds["simulations"] = [s.seed for s in scenario.simulations]
    if scenario.tomography is not None:
        seeds["tomography"] = scenario.tomography.seed
    report = Report(scenario=scenario.name, seeds=seeds)
    for task in scenario.tasks:
        if task == "reduce":
            report.tasks.append(_describe_state(rho, src_dims, keep))
        elif task == "simulate":
            report.tasks.append(_simulate_json(rho, scenario.simulations))
        elif task == "assess":
            report.tasks.append(_assess_json(resolve_constraints(scenario, rho), scenario.optimizer))
        elif task == "tomography":
            report.tasks.append(_tomography_json(rho, scenario.tomography))
    return report
