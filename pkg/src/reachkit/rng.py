"""Deterministic random streams.

All randomness in the package flows through `rng_stream`, which builds a
Philox (counter-based, 64-bit) generator from an integer seed plus an
optional tuple of stream keys. Stream splitting is done with
`numpy.random.SeedSequence(entropy=seed, spawn_key=keys)`, so the stream
for, say, replicate 3 of grid point 1 is `rng_stream(seed, 1, 3)` and is
independent of every other `(seed, keys)` combination. Identical inputs
yield identical streams on every platform numpy supports.
"""

from __future__ import annotations

import numpy as np

__all__ = ["rng_stream"]


def rng_stream(seed: int, *keys: int) -> np.random.Generator:
    """Return the Philox generator identified by `seed` and `keys`."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(seq))
