"""
Seeded random streams.
All randomness in the suites comes from here: numpy's PCG64 bit generator fed
by a SeedSequence built from (seed, *stream keys). A given key tuple always
yields the same stream on every platform, independent of which thread runs it.
Gaussian variates use numpy's ziggurat `standard_normal`, which is deterministic
for a fixed bit stream.
"""
from typing import Tuple

import numpy as np


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """
    Independent generator for one stream of a run.

    Args:
        seed: Run seed (64-bit unsigned)
        *stream: Stream keys, e.g. (dims index, trial index)

    Returns:
        numpy Generator backed by PCG64
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(k) for k in stream]]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def gaussian_matrix(rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
    """Matrix with independent N(0,1) entries."""
    return rng.standard_normal(shape)


def unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniformly distributed unit vector."""
    vec = rng.standard_normal(dim)
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        vec = np.zeros(dim)
        vec[0] = 1.0
        return vec
    return vec / norm
