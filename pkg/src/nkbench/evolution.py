"""Evolutionary algorithms over NK landscapes.

Shared machinery (binary tournament selection, restricted tournament
replacement) plus the variation operators of the GA variants and UMDA.
Every candidate is polished by the deterministic hill climber before it
counts as evaluated, and offspring enter the population through RTR.
hBOA plugs into the same loop through its model learn/sample pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .landscape import FITNESS_ATOL, Genome, NkInstance
from .local_search import GAIN_EPS, dhc_batch
from .rng import make_rng

ALGORITHMS = ("hboa", "umda", "ga-uniform", "ga-twopoint", "ga-nocrossover")

DEFAULT_CROSSOVER_RATE = 0.6
DEFAULT_GENERATION_FACTOR = 10  # max generations = 10 * n unless overridden


@dataclass
class Population:
    """Fixed-size population stored as a bit matrix with cached fitness."""

    bits: np.ndarray      # (N, n) uint8
    fitness: np.ndarray   # (N,) float64
    generation: int = 0

    def __post_init__(self) -> None:
        self.bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        self.fitness = np.asarray(self.fitness, dtype=np.float64)
        if self.bits.ndim != 2 or self.fitness.shape != (self.bits.shape[0],):
            raise ValueError("population bits/fitness shapes disagree")
        if self.size < 2 or self.size % 2:
            raise ValueError(f"population size must be even and >= 2, got {self.size}")

    @property
    def size(self) -> int:
        return self.bits.shape[0]

    def members(self) -> list[Genome]:
        return [Genome(self.bits[i].copy(), float(self.fitness[i])) for i in range(self.size)]

    def best(self) -> Genome:
        i = int(np.argmax(self.fitness))
        return Genome(self.bits[i].copy(), float(self.fitness[i]))


@dataclass
class ProbVector:
    """Per-position one-frequencies learned by UMDA."""

    p: np.ndarray

    def __post_init__(self) -> None:
        self.p = np.asarray(self.p, dtype=np.float64)
        if ((self.p < 0) | (self.p > 1)).any():
            raise ValueError("probabilities must lie in [0, 1]")


@dataclass
class EvoConfig:
    """Run parameters for one evolutionary algorithm.

    Defaults follow the benchmark conventions: crossover probability 0.6,
    per-bit mutation rate 1/n, RTR window min(n, N/5), and a generation
    cap of 10n treated as failure.
    """

    algorithm: str
    population_size: int
    p_c: float = DEFAULT_CROSSOVER_RATE
    p_m: float | None = None
    rtr_window: int | None = None
    max_generations: int | None = None
    target_value: float | None = None
    debug_checks: bool = False

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError("population_size must be even and >= 2")
        if not 0.0 <= self.p_c <= 1.0:
            raise ValueError("p_c must lie in [0, 1]")
        if self.p_m is not None and not 0.0 <= self.p_m <= 1.0:
            raise ValueError("p_m must lie in [0, 1]")
        if self.rtr_window is not None and self.rtr_window < 1:
            raise ValueError("rtr_window must be >= 1")

    def resolved(self, n: int) -> "EvoConfig":
        """Copy with instance-dependent defaults filled in."""
        return EvoConfig(
            algorithm=self.algorithm,
            population_size=self.population_size,
            p_c=self.p_c,
            p_m=self.p_m if self.p_m is not None else 1.0 / n,
            rtr_window=self.rtr_window
            if self.rtr_window is not None
            else max(1, min(n, self.population_size // 5)),
            max_generations=self.max_generations
            if self.max_generations is not None
            else DEFAULT_GENERATION_FACTOR * n,
            target_value=self.target_value,
            debug_checks=self.debug_checks,
        )


@dataclass
class RunOutcome:
    """Counters collected from one run; evaluations = N * (generations + 1)."""

    success: bool
    population_size: int
    generations: int
    evaluations: int
    dhc_flips: int
    best_fitness: float
    best_bits: np.ndarray


# ---------------------------------------------------------------------------
# Operators

def _tournament_indices(fitness: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    n = fitness.shape[0]
    a = rng.integers(0, n, size=count)
    b = rng.integers(0, n, size=count)
    return np.where(fitness[a] >= fitness[b], a, b)


def tournament_select(pop: Population, count: int, rng: np.random.Generator) -> list[Genome]:
    """Binary tournament: sample two with replacement, copy the fitter.

    Ties go to the first sampled member.
    """
    idx = _tournament_indices(pop.fitness, count, rng)
    return [Genome(pop.bits[i].copy(), float(pop.fitness[i])) for i in idx]


def _uniform_cross_rows(x: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> None:
    swap = rng.integers(0, 2, size=x.shape[0], dtype=np.uint8) == 1
    x[swap], y[swap] = y[swap], x[swap]  # fancy-indexed reads copy before assignment


def uniform_crossover(a: Genome, b: Genome, rng: np.random.Generator) -> tuple[Genome, Genome]:
    """Swap each position between the pair independently with probability 1/2."""
    if a.bits.shape != b.bits.shape:
        raise ValueError("parents must have equal length")
    x, y = a.bits.copy(), b.bits.copy()
    _uniform_cross_rows(x, y, rng)
    return Genome(x), Genome(y)


def _two_point_cross_rows(x: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> None:
    n = x.shape[0]
    c1 = int(rng.integers(0, n + 1))
    c2 = int(rng.integers(0, n + 1))
    if c1 > c2:
        c1, c2 = c2, c1
    seg = x[c1:c2].copy()
    x[c1:c2] = y[c1:c2]
    y[c1:c2] = seg


def two_point_crossover(a: Genome, b: Genome, rng: np.random.Generator) -> tuple[Genome, Genome]:
    """Exchange the segment [c1, c2) between two cut points drawn on 0..n."""
    if a.bits.shape != b.bits.shape:
        raise ValueError("parents must have equal length")
    x, y = a.bits.copy(), b.bits.copy()
    _two_point_cross_rows(x, y, rng)
    return Genome(x), Genome(y)


def _mutate_rows(bits: np.ndarray, p_m: float, rng: np.random.Generator) -> None:
    bits ^= rng.random(bits.shape) < p_m


def bit_flip_mutation(g: Genome, p_m: float, rng: np.random.Generator) -> Genome:
    """Flip each bit independently with probability p_m."""
    if not 0.0 <= p_m <= 1.0:
        raise ValueError("p_m must lie in [0, 1]")
    bits = g.bits.copy()
    _mutate_rows(bits[None, :], p_m, rng)
    return Genome(bits)


def _rtr_insert(
    bits: np.ndarray,
    fitness: np.ndarray,
    off_bits: np.ndarray,
    off_fitness: np.ndarray,
    window: int,
    rng: np.random.Generator,
) -> None:
    """Restricted tournament replacement of each offspring in sequence.

    For each offspring: sample `window` members without replacement, find
    the one at minimum Hamming distance (ties to the lowest population
    index), and replace it iff the offspring is strictly fitter.
    """
    size = bits.shape[0]
    for j in range(off_bits.shape[0]):
        sample = rng.choice(size, size=window, replace=False)
        dists = (bits[sample] != off_bits[j]).sum(axis=1)
        closest = sample[dists == dists.min()].min()
        if off_fitness[j] > fitness[closest]:
            bits[closest] = off_bits[j]
            fitness[closest] = off_fitness[j]


def rtr_replace(
    pop: Population, offspring: Sequence[Genome], w: int, rng: np.random.Generator
) -> Population:
    """Incorporate offspring via RTR; population size is unchanged."""
    if not 1 <= w <= pop.size:
        raise ValueError(f"window must satisfy 1 <= w <= {pop.size}")
    if not offspring:
        return pop
    off_bits = np.array([g.bits for g in offspring], dtype=np.uint8).reshape(len(offspring), -1)
    off_fit = np.empty(len(offspring))
    for j, g in enumerate(offspring):
        if g.fitness is None:
            raise ValueError("offspring must carry cached fitness")
        off_fit[j] = g.fitness
    _rtr_insert(pop.bits, pop.fitness, off_bits, off_fit, w, rng)
    return pop


def umda_learn(selected) -> ProbVector:
    """Exact per-position one-frequencies of the selected population."""
    bits = _as_bit_matrix(selected)
    if bits.shape[0] == 0:
        raise ValueError("cannot learn from an empty selection")
    counts = bits.sum(axis=0, dtype=np.int64)
    return ProbVector(counts / bits.shape[0])


def _sample_bernoulli(p: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.random((count, p.shape[0])) < p).astype(np.uint8)


def umda_sample(pv: ProbVector, count: int, rng: np.random.Generator) -> list[Genome]:
    """Draw genomes with independent per-position Bernoulli bits."""
    if count < 1:
        raise ValueError("count must be >= 1")
    bits = _sample_bernoulli(pv.p, count, rng)
    return [Genome(bits[i]) for i in range(count)]


def _as_bit_matrix(selected) -> np.ndarray:
    if isinstance(selected, np.ndarray):
        return np.asarray(selected, dtype=np.uint8)
    return np.array([g.bits for g in selected], dtype=np.uint8)


# ---------------------------------------------------------------------------
# Generation loop

def run_evolution(inst: NkInstance, cfg: EvoConfig, seed: int) -> RunOutcome:
    """One complete run; deterministic given (instance, config, seed).

    Initializes N uniform random genomes and polishes each with DHC, then
    per generation: binary-tournament selection of N parents, variation
    (crossover+mutation, mutation only, or model learn/sample), DHC on
    every offspring, and RTR incorporation.  Terminates with success once
    any member reaches the target value within tolerance, or with failure
    at the generation cap.
    """
    cfg.validate()
    cfg = cfg.resolved(inst.n)
    if cfg.target_value is None:
        raise ValueError("run_evolution requires cfg.target_value for success detection")
    if cfg.algorithm == "hboa":
        from . import hboa  # deferred: hboa depends on this module's types

    rng = make_rng(seed)
    n = inst.n
    size = cfg.population_size
    target = cfg.target_value - FITNESS_ATOL

    bits = rng.integers(0, 2, size=(size, n), dtype=np.uint8)
    bits, fitness, flips = dhc_batch(inst, bits)
    evaluations = size
    total_flips = int(flips.sum())
    generations = 0
    success = bool(fitness.max() >= target)

    while not success and generations < cfg.max_generations:
        parents = bits[_tournament_indices(fitness, size, rng)]
        if cfg.algorithm == "umda":
            offspring = _sample_bernoulli(umda_learn(parents).p, size, rng)
        elif cfg.algorithm == "hboa":
            model = hboa.learn_model(parents)
            offspring = hboa._sample_bits(model, size, rng)
        else:
            offspring = parents.copy()
            if cfg.algorithm != "ga-nocrossover":
                crossed = rng.random(size // 2) < cfg.p_c
                for pair in np.flatnonzero(crossed):
                    x, y = offspring[2 * pair], offspring[2 * pair + 1]
                    if cfg.algorithm == "ga-uniform":
                        _uniform_cross_rows(x, y, rng)
                    else:
                        _two_point_cross_rows(x, y, rng)
            _mutate_rows(offspring, cfg.p_m, rng)

        offspring, off_fitness, off_flips = dhc_batch(inst, offspring)
        evaluations += size
        total_flips += int(off_flips.sum())
        if cfg.debug_checks:
            _assert_locally_optimal(inst, offspring)
        _rtr_insert(bits, fitness, offspring, off_fitness, cfg.rtr_window, rng)
        generations += 1
        success = bool(fitness.max() >= target)

    best = int(np.argmax(fitness))
    return RunOutcome(
        success=success,
        population_size=size,
        generations=generations,
        evaluations=evaluations,
        dhc_flips=total_flips,
        best_fitness=float(fitness[best]),
        best_bits=bits[best].copy(),
    )


def _assert_locally_optimal(inst: NkInstance, bits: np.ndarray) -> None:
    from .local_search import _flip_deltas, _padded_state

    cur, sub, weight, tables_pad = _padded_state(inst, bits)
    signs = 1 - 2 * bits.astype(np.int64)
    deltas = _flip_deltas(tables_pad, sub, weight, cur, signs)
    if (deltas > GAIN_EPS).any():
        raise AssertionError("population member is not single-flip locally optimal")
