"""Decide whether measured expectation values evidence bipartite entanglement."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DimensionError,
    EntEvidenceError,
    InconclusiveError,
    InfeasibleConstraintsError,
    NotHermitianError,
    PositivityError,
    ScenarioParseError,
    ValidationError,
)
from .states import DensityMatrix, StateVector, cat_mixed, cat_pure, ghz, phi_plus, beam_splitter_photon  # noqa: E402
from .observables import Observable, pauli, expectation, common_product_eigenbasis  # noqa: E402
from .entanglement import negativity, ppt_verdict, schmidt, PPTVerdict  # noqa: E402
from .evidence import Constraint, ConstraintSet, OptimizerOptions, Verdict, assess, cat_family  # noqa: E402
from .tomography import tomography_two_qubit  # noqa: E402
from .scenarios import ghz_reduction, run_scenario, simulate_cat_experiment  # noqa: E402
