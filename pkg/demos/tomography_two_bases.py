"""Why one measurement basis is not enough to reconstruct a state.

Run:  python3 demos/tomography_two_bases.py
"""
import numpy as np

from entevidence import states
from entevidence.entanglement import negativity
from entevidence.tomography import PAULI_SETTINGS, tomography_two_qubit

pure = states.pure_density(states.cat_pure(0.0))
mixed = states.cat_mixed()

# Computational basis only: off-diagonal elements are invisible and the
# estimate leaves them at zero.
a = tomography_two_qubit(pure, ["ZZ"], 100_000, seed=1, mode="partial").estimate
b = tomography_two_qubit(mixed, ["ZZ"], 100_000, seed=2, mode="partial").estimate
print("Z-only estimate of the pure cat:\n", np.round(a.matrix.real, 3))
print("trace distance between the two Z-only estimates:", round(states.trace_distance(a, b), 4))

# Nine product-Pauli settings recover the coherence and its phase.
for label, rho in (("pure phi=0", pure), ("pure phi=pi", states.pure_density(states.cat_pure(np.pi))),
                   ("mixed", mixed)):
    res = tomography_two_qubit(rho, PAULI_SETTINGS, 100_000, seed=3)
    print(f"{label:12} <XX>={res.expectations['XX']:+.3f}  negativity={negativity(res.estimate):.3f}"
          f"  distance to truth={states.trace_distance(res.estimate, rho):.4f}")

# More shots, smaller error.
for shots in (1_000, 10_000, 100_000, 1_000_000):
    d = np.median([states.trace_distance(tomography_two_qubit(pure, PAULI_SETTINGS, shots, seed=s).estimate, pure)
                   for s in range(10)])
    print(f"{shots:>9} shots/setting: median trace distance {d:.4f}")
