"""Branch-and-bound certification of NK global optima.

Bits are fixed in index order X_0..X_{n-1}.  Pruning uses the standard
admissible relaxation for additively decomposable functions: each
subfunction contributes its exact value once all of its variables are
fixed, and otherwise the maximum of its table over the joint settings of
its unfixed variables (fixed ones held at prefix values).  The bound is
maintained incrementally: fixing one bit touches only the subfunctions
whose variable set contains it.

The search is seeded with the best local optimum of a multi-restart
stochastic hill climber, which typically starts the traversal with the
optimum already in hand and reduces the tree to a proof of optimality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .landscape import Genome, NkInstance, evaluate, evaluate_batch
from .local_search import stochastic_climb_batch
from .rng import STREAM_SOLVE, make_rng, split_seed

PRUNE_EPS = 1e-12           # bound <= incumbent + eps cannot improve the incumbent
DEFAULT_RESTART_FACTOR = 10  # seeding restarts = 10 * n unless overridden

_ENUMERATION_LIMIT = 28      # enumerate_optimum refuses larger n
_ENUM_CHUNK = 1 << 14


class NodeLimitError(RuntimeError):
    """Search exceeded its node budget; carries the uncertified incumbent."""

    def __init__(self, incumbent: Genome, nodes_expanded: int, node_limit: int):
        super().__init__(
            f"branch and bound exceeded node limit {node_limit}; "
            f"best incumbent value {incumbent.fitness}"
        )
        self.incumbent = incumbent
        self.nodes_expanded = nodes_expanded
        self.node_limit = node_limit


@dataclass
class ExactResult:
    optimum_bits: np.ndarray
    optimum_value: float
    nodes_expanded: int
    seed_value: float  # incumbent value produced by hill-climber seeding


def _build_bound_tables(inst: NkInstance):
    """Partial-max tables per subfunction, keyed by fix order.

    sorted_vars[i] lists subfunction i's variables ascending (the order
    the search fixes them).  bound_tables[i][t][p] is the max of table i
    over the unfixed variables when the first t sorted variables carry
    pattern p (earliest-fixed variable most significant); at t = k+1 the
    entry is the exact table value.
    """
    n, k = inst.n, inst.k
    width = k + 1
    weights = inst.bit_weights  # storage packing: own bit MSB, then draw order
    sorted_vars: list[list[int]] = []
    bound_tables: list[list[list[float]]] = []
    for i in range(n):
        storage_vars = inst.var_sets[i].tolist()
        svars = sorted(storage_vars)
        sorted_vars.append(svars)
        storage_weight = {v: int(weights[r]) for r, v in enumerate(storage_vars)}
        full = [0.0] * (1 << width)
        row = inst.tables[i]
        for p in range(1 << width):
            idx = 0
            for r, v in enumerate(svars):
                if (p >> (width - 1 - r)) & 1:
                    idx += storage_weight[v]
            full[p] = float(row[idx])
        levels = [full]
        for _ in range(width):
            prev = levels[0]
            levels.insert(0, [max(prev[2 * q], prev[2 * q + 1]) for q in range(len(prev) // 2)])
        bound_tables.append(levels)
    affects = [inst._flip_index.ragged[d][0].tolist() for d in range(n)]
    return sorted_vars, bound_tables, affects


def upper_bound(inst: NkInstance, prefix) -> float:
    """Admissible bound on any completion of the first d bits."""
    prefix = np.asarray(prefix, dtype=np.uint8)
    d = prefix.shape[0]
    if d > inst.n:
        raise ValueError(f"prefix longer than n={inst.n}")
    sorted_vars, bound_tables, _ = _build_bound_tables(inst)
    total = 0.0
    for i in range(inst.n):
        svars = sorted_vars[i]
        pattern = 0
        t = 0
        for v in svars:
            if v >= d:
                break
            pattern = 2 * pattern + int(prefix[v])
            t += 1
        total += bound_tables[i][t][pattern]
    return total


def seed_incumbent(
    inst: NkInstance, restarts: int | None = None, rng: np.random.Generator | None = None
) -> Genome:
    """Best local optimum from `restarts` stochastic hill climbs.

    Restart r uses its own generator seeded from the r-th draw of `rng`,
    so climbs with a shared rng state share a restart-stream prefix.
    """
    if restarts is None:
        restarts = DEFAULT_RESTART_FACTOR * inst.n
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if rng is None:
        rng = make_rng(inst.seed, STREAM_SOLVE)
    seeds = rng.integers(0, 2**63, size=restarts)
    bits, fitness = stochastic_climb_batch(inst, [int(s) for s in seeds])
    best = int(np.argmax(fitness))
    return Genome(bits[best].copy(), evaluate(inst, bits[best]))


def solve(
    inst: NkInstance,
    restarts: int | None = None,
    node_limit: int | None = None,
    seed: int | None = None,
) -> ExactResult:
    """Certify the global optimum by depth-first branch and bound.

    Deterministic given the instance: the seeding stream defaults to a
    split of the instance seed.  restarts=0 disables seeding (diagnostic
    use; the search then starts from an incumbent of -inf).
    """
    n = inst.n
    if seed is None:
        seed = split_seed(inst.seed, STREAM_SOLVE)
    if restarts == 0:
        seed_genome = None
        seed_value = -math.inf
    else:
        seed_genome = seed_incumbent(inst, restarts, make_rng(seed))
        seed_value = seed_genome.fitness

    sorted_vars, bound_tables, affects = _build_bound_tables(inst)
    # Level index of each subfunction is a function of depth alone, so the
    # parent/child partial-max rows every depth touches can be prefetched.
    fixed_before = [[sum(1 for v in sorted_vars[i] if v < d) for i in range(n)] for d in range(n)]
    aff_rows: list[list[tuple[list[float], list[float], int]]] = []
    for d in range(n):
        rows = []
        for i in affects[d]:
            t = fixed_before[d][i]
            rows.append((bound_tables[i][t], bound_tables[i][t + 1], i))
        aff_rows.append(rows)

    pat = [0] * n
    prefix = np.zeros(n, dtype=np.uint8)
    best_bits = None if seed_genome is None else seed_genome.bits.copy()
    best_val = seed_value
    nodes = 0
    limit = math.inf if node_limit is None else node_limit
    root_bound = 0.0
    for i in range(n):
        root_bound += bound_tables[i][0][0]

    def visit(depth: int, bound: float, aff_rows=aff_rows, pat=pat, prefix=prefix) -> None:
        nonlocal nodes, best_val, best_bits
        nodes += 1
        if nodes > limit:
            incumbent = Genome(best_bits.copy(), best_val) if best_bits is not None else Genome(
                np.zeros(n, dtype=np.uint8), -math.inf
            )
            raise NodeLimitError(incumbent, nodes, node_limit)
        if depth == n:
            val = evaluate(inst, prefix)
            if val > best_val:
                best_val = val
                best_bits = prefix.copy()
            return
        rows = aff_rows[depth]
        d0 = 0.0
        d1 = 0.0
        for parent, child, i in rows:
            p = pat[i]
            old = parent[p]
            q = 2 * p
            d0 += child[q] - old
            d1 += child[q + 1] - old
        b0 = bound + d0
        b1 = bound + d1
        if b1 >= b0:
            order = ((1, b1), (0, b0))
        else:
            order = ((0, b0), (1, b1))
        next_depth = depth + 1
        for v, bv in order:
            if bv > best_val + PRUNE_EPS:
                prefix[depth] = v
                for _, _, i in rows:
                    pat[i] = 2 * pat[i] + v
                visit(next_depth, bv)
                for _, _, i in rows:
                    pat[i] >>= 1

    visit(0, root_bound)
    if best_bits is None:
        raise AssertionError("search terminated without any incumbent")
    return ExactResult(
        optimum_bits=best_bits,
        optimum_value=float(best_val),
        nodes_expanded=nodes,
        seed_value=float(seed_value),
    )


def enumerate_optimum(inst: NkInstance) -> tuple[np.ndarray, float]:
    """Exhaustive 2^n scan; independent of the branch-and-bound path."""
    n = inst.n
    if n > _ENUMERATION_LIMIT:
        raise ValueError(f"enumeration supports n <= {_ENUMERATION_LIMIT}, got {n}")
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    best_val = -math.inf
    best_bits = None
    for start in range(0, 1 << n, _ENUM_CHUNK):
        stop = min(start + _ENUM_CHUNK, 1 << n)
        codes = np.arange(start, stop, dtype=np.uint64)
        bits = ((codes[:, None] >> shifts) & 1).astype(np.uint8)
        vals = evaluate_batch(inst, bits)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_bits = bits[i].copy()
    return best_bits, best_val
