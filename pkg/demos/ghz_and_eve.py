"""Alice and Bob compare notes in the Z basis: a Bell pair, or a GHZ state with Eve?

Run:  python3 demos/ghz_and_eve.py
"""
import numpy as np

from entevidence import evidence as ev
from entevidence import states
from entevidence.entanglement import negativity, ppt_verdict
from entevidence.observables import born_distribution, pauli_labels, pauli_setting
from entevidence.scenarios import ghz_reduction

bell = states.pure_density(states.phi_plus())
shared = ghz_reduction()  # the third qubit is traced out
print("Alice and Bob's share of the GHZ state:\n", np.round(shared.matrix.real, 3))
print("PPT verdict:", ppt_verdict(shared).value, " purity:", states.purity(shared))

# In the computational basis the two situations are indistinguishable.
zz = pauli_setting("ZZ")
print("Z x Z, Bell pair:", born_distribution(bell, zz))
print("Z x Z, GHZ share:", born_distribution(shared, zz))

# All fifteen Pauli expectations tell them apart.
opts = ev.OptimizerOptions(restarts=8)
for name, rho in (("Bell pair", bell), ("GHZ share", shared)):
    cs = ev.constraints_from_state(rho, pauli_labels(2))
    v = ev.assess(cs, opts)
    print(f"{name}: {v.verdict.value}, min negativity {v.min_negativity.value:.4f}, "
          f"state negativity {negativity(rho):.4f}")
