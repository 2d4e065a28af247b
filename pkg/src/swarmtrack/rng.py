"""Seeded random streams.

All randomness goes through ``numpy.random.Generator`` backed by PCG64
(the 128-bit-state permuted congruential generator, PCG XSL RR 128/64).
Its output for a given seed is fixed across platforms.  Simulation code
only draws ``Generator.random()`` doubles, which numpy builds as
``(next_uint64 >> 11) * 2**-53``, so the consumed stream is
defined by PCG64 alone.

Each run gets independent named streams so that, for example, extra
sensing draws never shift robot trajectories.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# Order is part of the determinism contract: do not reorder.
STREAM_NAMES = ("crowd", "mobility", "sensing", "placement")


def splitmix64(x: int) -> int:
    """One SplitMix64 output step for state ``x`` (Steele, Lea & Flood 2014)."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(base_seed: int, *indices: int) -> int:
    """Derive a 64-bit seed from ``base_seed`` and a tuple of indices.

    ``h = splitmix64(base)``; then for every index ``i``:
    ``h = splitmix64(h ^ splitmix64(i))``.  Distinct index tuples of the
    same length give distinct seeds with overwhelming probability.
    """
    h = splitmix64(base_seed & MASK64)
    for i in indices:
        h = splitmix64(h ^ splitmix64(i & MASK64))
    return h


def make_streams(seed: int) -> dict[str, np.random.Generator]:
    """Independent generators keyed by ``STREAM_NAMES``."""
    children = np.random.SeedSequence(seed & MASK64).spawn(len(STREAM_NAMES))
    return {
        name: np.random.Generator(np.random.PCG64(child))
        for name, child in zip(STREAM_NAMES, children)
    }


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & MASK64))
