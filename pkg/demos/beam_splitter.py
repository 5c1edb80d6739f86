"""A single photon on a 50:50 beam splitter entangles the two output modes.

Run:  python3 demos/beam_splitter.py
"""
import numpy as np

from entevidence import states
from entevidence.entanglement import negativity, schmidt

# Modes truncated to 0 or 1 photons: the photon is reflected or transmitted.
psi = states.beam_splitter_photon()
print("amplitudes:", np.round(psi.amplitudes.real, 4))
s = schmidt(psi)
print("Schmidt coefficients:", np.round(s.coefficients, 6), " rank", s.rank)
print("negativity:", negativity(states.pure_density(psi)))
