"""Seed derivation for reproducible experiments.

Every random decision in the toolkit flows from a single 64-bit master
seed through a documented split scheme, so any instance, certification,
or algorithm run can be replayed in isolation:

    master seed
      -> instance seed   = split_seed(master, STREAM_INSTANCE, k, n, index)
      -> solver stream   = split_seed(instance_seed, STREAM_SOLVE)
      -> bisection seed  = split_seed(master, STREAM_BISECT, k, n, index, algo_id)
      -> run seed        = split_seed(bisection_seed, STREAM_RUN, size, run_index)

Derivation uses numpy's SeedSequence entropy pooling: the path of integer
tags is hashed into a fresh 64-bit child seed, so sibling streams are
statistically independent and insensitive to the order work is executed.
Generators are PCG64 throughout.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# Stream tags used in derivation paths.
STREAM_INSTANCE = 1
STREAM_SOLVE = 2
STREAM_BISECT = 3
STREAM_RUN = 4

# Stable per-algorithm identifiers (independent of config order).
ALGORITHM_IDS = {
    "hboa": 0,
    "umda": 1,
    "ga-uniform": 2,
    "ga-twopoint": 3,
    "ga-nocrossover": 4,
}


def split_seed(seed: int, *path: int) -> int:
    """Derive a child 64-bit seed from `seed` and a path of integer tags."""
    entropy = [seed & MASK64] + [p & MASK64 for p in path]
    ss = np.random.SeedSequence(entropy)
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """PCG64 generator for the stream identified by (seed, *path)."""
    if path:
        seed = split_seed(seed, *path)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed & MASK64)))
