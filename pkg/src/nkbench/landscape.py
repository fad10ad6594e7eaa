"""NK landscape instances: generation, evaluation, and serialization.

An instance over n bits assigns each position i a set of k neighbor
positions and a lookup table of 2^(k+1) values in [0,1).  The objective
is the sum over i of the table entry selected by the bits of position i
and its neighbors.  Table indexing convention (frozen, instance files
depend on it): bit i is the most significant index bit, followed by the
neighbors in stored draw order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .rng import MASK64, make_rng

FITNESS_ATOL = 1e-9  # absolute tolerance for all fitness equality checks

INSTANCE_FORMAT_VERSION = 1


@dataclass
class Genome:
    """Fixed-length bit vector with an optionally cached fitness value."""

    bits: np.ndarray
    fitness: float | None = None

    def copy(self) -> "Genome":
        return Genome(self.bits.copy(), self.fitness)


@dataclass(eq=False)
class NkInstance:
    """One NK landscape: neighbor structure plus per-bit lookup tables.

    Immutable after creation; evaluation helpers below are pure, so
    instances are safe to share across worker processes or threads.
    """

    n: int
    k: int
    neighbors: np.ndarray  # (n, k) int32, neighbors[i] excludes i
    tables: np.ndarray     # (n, 2^(k+1)) float64, entries in [0, 1)
    seed: int              # 64-bit seed that produced the instance

    def __post_init__(self) -> None:
        self.neighbors = np.asarray(self.neighbors, dtype=np.int32).reshape(self.n, self.k)
        self.tables = np.ascontiguousarray(self.tables, dtype=np.float64).reshape(
            self.n, 2 ** (self.k + 1)
        )

    @cached_property
    def var_sets(self) -> np.ndarray:
        """(n, k+1) positions indexing each subfunction: own bit first."""
        vs = np.empty((self.n, self.k + 1), dtype=np.int64)
        vs[:, 0] = np.arange(self.n)
        vs[:, 1:] = self.neighbors
        return vs

    @cached_property
    def bit_weights(self) -> np.ndarray:
        """(k+1,) powers of two, own bit most significant."""
        return 1 << np.arange(self.k, -1, -1, dtype=np.int64)

    @cached_property
    def _flip_index(self) -> "_FlipIndex":
        return _FlipIndex.build(self)

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on violation."""
        n, k = self.n, self.k
        if n < 1 or not 0 <= k <= n - 1:
            raise ValueError(f"invalid shape n={n}, k={k}")
        if self.neighbors.shape != (n, k):
            raise ValueError("neighbor array has wrong shape")
        for i in range(n):
            row = self.neighbors[i]
            if len(set(row.tolist())) != k or i in row:
                raise ValueError(f"neighbor list of bit {i} is not a k-subset excluding {i}")
            if k and (row.min() < 0 or row.max() >= n):
                raise ValueError(f"neighbor list of bit {i} out of range")
        if self.tables.shape != (n, 2 ** (k + 1)):
            raise ValueError("table array has wrong shape")
        if (self.tables < 0).any() or (self.tables >= 1).any():
            raise ValueError("table entries must lie in [0, 1)")


@dataclass
class _FlipIndex:
    """Reverse dependency index: which subfunctions a bit flip touches.

    Padded to a rectangle so whole-population flip deltas vectorize; pad
    entries point at a dummy all-zero table row with weight 0, which
    contributes exactly 0 to every delta.
    """

    sub: np.ndarray          # (n, M) affected subfunction ids, pad = n
    weight: np.ndarray       # (n, M) index weight of the bit in that table, pad = 0
    tables_pad: np.ndarray   # (n+1, 2^(k+1)) tables plus dummy zero row
    ragged: list             # per position: (sub ids, weights) without padding

    @staticmethod
    def build(inst: NkInstance) -> "_FlipIndex":
        n = inst.n
        per_pos: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        weights = inst.bit_weights
        for i in range(n):
            for r, v in enumerate(inst.var_sets[i]):
                per_pos[int(v)].append((i, int(weights[r])))
        m = max(len(entries) for entries in per_pos)
        sub = np.full((n, m), n, dtype=np.int64)
        weight = np.zeros((n, m), dtype=np.int64)
        ragged = []
        for p, entries in enumerate(per_pos):
            for j, (i, w) in enumerate(entries):
                sub[p, j] = i
                weight[p, j] = w
            ragged.append(
                (np.array([e[0] for e in entries], dtype=np.int64),
                 np.array([e[1] for e in entries], dtype=np.int64))
            )
        tables_pad = np.vstack([inst.tables, np.zeros((1, inst.tables.shape[1]))])
        return _FlipIndex(sub, weight, tables_pad, ragged)


def generate_instance(n: int, k: int, seed: int) -> NkInstance:
    """Generate a random instance, fully determined by (n, k, seed).

    Neighbors of each bit are a uniform k-subset of the other positions
    (Floyd sampling, stored in draw order); table entries are i.i.d.
    uniform on [0,1).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must satisfy 0 <= k <= n-1, got k={k}, n={n}")
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be an unsigned 64-bit integer")

    rng = make_rng(seed)
    neighbors = np.empty((n, k), dtype=np.int32)
    universe = n - 1  # positions other than i, relabeled 0..n-2
    for i in range(n):
        chosen: list[int] = []
        taken: set[int] = set()
        for j in range(universe - k, universe):
            t = int(rng.integers(0, j + 1))
            pick = j if t in taken else t
            taken.add(pick)
            chosen.append(pick)
        # map relabeled universe back to actual positions (skip i)
        neighbors[i] = [c if c < i else c + 1 for c in chosen]
    tables = rng.random((n, 2 ** (k + 1)))
    return NkInstance(n=n, k=k, neighbors=neighbors, tables=tables, seed=seed)


def _pattern_indices(inst: NkInstance, bits: np.ndarray) -> np.ndarray:
    """Current table index of every subfunction, one genome: (n,) int64."""
    return (bits[inst.var_sets].astype(np.int64) * inst.bit_weights).sum(axis=-1)


def _pattern_indices_batch(inst: NkInstance, bits: np.ndarray) -> np.ndarray:
    """Table indices for a population: (B, n) int64."""
    return (bits[:, inst.var_sets].astype(np.int64) * inst.bit_weights).sum(axis=-1)


def evaluate(inst: NkInstance, bits: np.ndarray) -> float:
    """Objective value of one bit vector: sum of the n table entries."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape != (inst.n,):
        raise ValueError(f"expected {inst.n} bits, got shape {bits.shape}")
    idx = _pattern_indices(inst, bits)
    return float(inst.tables[np.arange(inst.n), idx].sum())


def evaluate_batch(inst: NkInstance, bits: np.ndarray) -> np.ndarray:
    """Objective values of a (B, n) population; same rounding as evaluate()."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 2 or bits.shape[1] != inst.n:
        raise ValueError(f"expected (B, {inst.n}) bit matrix, got shape {bits.shape}")
    idx = _pattern_indices_batch(inst, bits)
    # contiguous copy so each row reduces in the same order as evaluate()
    contrib = np.ascontiguousarray(inst.tables[np.arange(inst.n), idx])
    return contrib.sum(axis=-1)


def delta_evaluate(inst: NkInstance, bits: np.ndarray, fitness: float, flip_pos: int) -> float:
    """Fitness after flipping one bit, touching only affected subfunctions.

    `fitness` must be the current value of `bits` (within tolerance); only
    the subfunctions whose variable set contains flip_pos are re-read.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if not 0 <= flip_pos < inst.n:
        raise ValueError(f"flip position {flip_pos} out of range for n={inst.n}")
    subs, weights = inst._flip_index.ragged[flip_pos]
    idx = (bits[inst.var_sets[subs]].astype(np.int64) * inst.bit_weights).sum(axis=-1)
    sign = 1 - 2 * int(bits[flip_pos])
    delta = (inst.tables[subs, idx + sign * weights] - inst.tables[subs, idx]).sum()
    return fitness + float(delta)


def evaluated_genome(inst: NkInstance, bits: np.ndarray) -> Genome:
    """Genome with its fitness cache filled in."""
    bits = np.asarray(bits, dtype=np.uint8)
    return Genome(bits, evaluate(inst, bits))


def random_genome(inst: NkInstance, rng: np.random.Generator) -> Genome:
    """Uniform random genome with cached fitness."""
    bits = rng.integers(0, 2, size=inst.n, dtype=np.uint8)
    return Genome(bits, evaluate(inst, bits))


# ---------------------------------------------------------------------------
# Canonical instance file format (versioned JSON)

def instance_to_dict(inst: NkInstance) -> dict:
    return {
        "format_version": INSTANCE_FORMAT_VERSION,
        "n": inst.n,
        "k": inst.k,
        "seed": inst.seed,
        "neighbors": inst.neighbors.tolist(),
        "tables": inst.tables.tolist(),
    }


def instance_from_dict(obj: dict) -> NkInstance:
    if obj.get("format_version") != INSTANCE_FORMAT_VERSION:
        raise ValueError(f"unsupported instance format_version: {obj.get('format_version')!r}")
    inst = NkInstance(
        n=int(obj["n"]),
        k=int(obj["k"]),
        neighbors=np.array(obj["neighbors"], dtype=np.int32).reshape(int(obj["n"]), int(obj["k"])),
        tables=np.array(obj["tables"], dtype=np.float64),
        seed=int(obj["seed"]),
    )
    inst.validate()
    return inst


def save_instance(inst: NkInstance, path: str | Path) -> None:
    """Write the canonical JSON form; doubles round-trip bit-exactly."""
    Path(path).write_text(json.dumps(instance_to_dict(inst)) + "\n")


def load_instance(path: str | Path) -> NkInstance:
    return instance_from_dict(json.loads(Path(path).read_text()))
