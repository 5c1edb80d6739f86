"""Reproducible random streams.

Every stochastic routine draws from a Philox-4x64-10 counter-based generator
whose 128-bit key is ``(seed, stream)``.  Two calls with the same pair see the
same numbers on any platform, and distinct stream ordinals never overlap, so
independent batches (restarts, tomography settings) can run in any order.
"""

import numpy as np

RNG_ALGORITHM = "philox4x64-10/numpy-generator"

_MASK64 = (1 << 64) - 1


def stream(seed: int, ordinal: int = 0) -> np.random.Generator:
    key = np.array([int(seed) & _MASK64, int(ordinal) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
