"""Hill climbers over NK landscapes.

Two climbers are provided: the deterministic hill climber (DHC) applied
to every candidate inside the evolutionary algorithms, and a stochastic
bit-flip climber used to seed the branch-and-bound solver.  Both count
`flips` as accepted moves; candidate evaluations are reported separately
in `proposals` so either accounting convention is recoverable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .landscape import Genome, NkInstance, evaluate, evaluate_batch

GAIN_EPS = 1e-12            # minimum accepted DHC improvement, guards float noise
STALL_FACTOR = 32           # stochastic climber stops after n*STALL_FACTOR rejections


@dataclass
class LocalSearchResult:
    genome: Genome
    flips: int       # accepted single-bit moves
    proposals: int   # candidate flips examined


def _padded_state(inst: NkInstance, bits: np.ndarray):
    """(cur, sub, weight, tables_pad) for a (B, n) population.

    cur has one trailing dummy column so padded flip-index entries resolve
    to a harmless (row n, index 0) table read.
    """
    fi = inst._flip_index
    b = bits.shape[0]
    cur = np.zeros((b, inst.n + 1), dtype=np.int64)
    cur[:, : inst.n] = (bits[:, inst.var_sets].astype(np.int64) * inst.bit_weights).sum(axis=-1)
    return cur, fi.sub, fi.weight, fi.tables_pad


def _flip_deltas(tables_pad, sub, weight, cur, signs):
    """Fitness delta of flipping each position of each row: (B, n)."""
    base = cur[:, sub]                      # (B, n, M)
    shifted = base + signs[:, :, None] * weight
    return (tables_pad[sub, shifted] - tables_pad[sub, base]).sum(axis=-1)


def dhc_batch(inst: NkInstance, bits: np.ndarray):
    """Steepest-ascent DHC on every row of a (B, n) bit matrix, in place.

    Returns (bits, fitness, flips).  Each row repeatedly applies the
    single-bit flip with maximum gain (ties to the lowest index) while the
    best gain exceeds GAIN_EPS; rows converge independently.
    """
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    fitness = evaluate_batch(inst, bits)
    cur, sub, weight, tables_pad = _padded_state(inst, bits)
    flips = np.zeros(bits.shape[0], dtype=np.int64)
    active = np.arange(bits.shape[0])
    while active.size:
        rows_bits = bits[active]
        signs = 1 - 2 * rows_bits.astype(np.int64)
        deltas = _flip_deltas(tables_pad, sub, weight, cur[active], signs)
        best = deltas.argmax(axis=1)
        gain = deltas[np.arange(active.size), best]
        move = gain > GAIN_EPS
        if not move.any():
            break
        rows = active[move]
        pos = best[move]
        sign = 1 - 2 * bits[rows, pos].astype(np.int64)
        np.add.at(cur, (rows[:, None], sub[pos]), sign[:, None] * weight[pos])
        bits[rows, pos] ^= 1
        fitness[rows] += gain[move]
        flips[rows] += 1
        active = rows
    return bits, fitness, flips


def dhc(inst: NkInstance, start: Genome) -> LocalSearchResult:
    """Deterministic hill climber: best single-bit flip until locally optimal."""
    bits = np.asarray(start.bits, dtype=np.uint8).copy()
    if bits.shape != (inst.n,):
        raise ValueError(f"expected {inst.n} bits, got shape {bits.shape}")
    out_bits, fitness, flips = dhc_batch(inst, bits[None, :])
    n_flips = int(flips[0])
    return LocalSearchResult(
        genome=Genome(out_bits[0], float(fitness[0])),
        flips=n_flips,
        proposals=inst.n * (n_flips + 1),
    )


def stochastic_hill_climb(
    inst: NkInstance, start: Genome, rng: np.random.Generator
) -> LocalSearchResult:
    """First-improvement climber proposing uniform random single-bit flips.

    Accepts strict improvements only and stops after n * STALL_FACTOR
    consecutive rejections, so an existing improving flip is missed with
    probability below (1 - 1/n)^(32 n) ~ e^-32.
    """
    bits = np.asarray(start.bits, dtype=np.uint8).copy()
    if bits.shape != (inst.n,):
        raise ValueError(f"expected {inst.n} bits, got shape {bits.shape}")
    fitness = evaluate(inst, bits)
    cur, sub, weight, tables_pad = _padded_state(inst, bits[None, :])
    limit = inst.n * STALL_FACTOR
    rejects = 0
    flips = 0
    proposals = 0
    while rejects < limit:
        p = int(rng.integers(0, inst.n))
        proposals += 1
        s = 1 - 2 * int(bits[p])
        base = cur[0, sub[p]]
        delta = float((tables_pad[sub[p], base + s * weight[p]] - tables_pad[sub[p], base]).sum())
        if delta > 0.0:
            cur[0, sub[p]] += s * weight[p]
            bits[p] ^= 1
            fitness += delta
            flips += 1
            rejects = 0
        else:
            rejects += 1
    return LocalSearchResult(Genome(bits, fitness), flips, proposals)


def stochastic_climb_batch(inst: NkInstance, seeds: list[int]):
    """Run one stochastic climb per seed, vectorized across climbs.

    Each climb r draws its start and its proposal stream from its own
    PCG64 generator seeded with seeds[r], so results match sequential
    stochastic_hill_climb calls with the same per-climb generators.
    Returns (bits, fitness) of the resulting local optima.
    """
    gens = [np.random.Generator(np.random.PCG64(s)) for s in seeds]
    r = len(gens)
    n = inst.n
    bits = np.empty((r, n), dtype=np.uint8)
    for i, g in enumerate(gens):
        bits[i] = g.integers(0, 2, size=n, dtype=np.uint8)
    fitness = evaluate_batch(inst, bits)
    cur, sub, weight, tables_pad = _padded_state(inst, bits)

    block = 512
    buf = np.empty((r, block), dtype=np.int64)
    ptr = np.full(r, block, dtype=np.int64)
    rejects = np.zeros(r, dtype=np.int64)
    limit = n * STALL_FACTOR
    active = np.arange(r)
    while active.size:
        refill = active[ptr[active] >= block]
        for row in refill:
            buf[row] = gens[row].integers(0, n, size=block)
            ptr[row] = 0
        pos = buf[active, ptr[active]]
        ptr[active] += 1

        s = 1 - 2 * bits[active, pos].astype(np.int64)
        rows_sub = sub[pos]                      # (A, M)
        base = cur[active[:, None], rows_sub]
        deltas = (tables_pad[rows_sub, base + s[:, None] * weight[pos]]
                  - tables_pad[rows_sub, base]).sum(axis=-1)
        acc = deltas > 0.0
        rows = active[acc]
        if rows.size:
            p_acc = pos[acc]
            np.add.at(cur, (rows[:, None], sub[p_acc]), s[acc][:, None] * weight[p_acc])
            bits[rows, p_acc] ^= 1
            fitness[rows] += deltas[acc]
            rejects[rows] = 0
        rej = active[~acc]
        rejects[rej] += 1
        active = active[(rejects[active] < limit)]
    return bits, fitness
