"""Bayesian network model building and sampling for hBOA.

The model assigns each variable a binary decision tree whose internal
nodes test other variables and whose leaves hold 0/1 outcome counts from
the selected population.  Trees are grown greedily: the split with the
globally best positive net gain is applied until none remains, subject
to the dependency relation staying acyclic.  Scoring is the
Bayesian-Dirichlet metric with likelihood equivalence (equivalent sample
size 1 per leaf) minus a complexity penalty of 0.5*log2(N) per added
leaf parameter.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

_LOG_GAMMA_HALF = float(gammaln(0.5))


def leaf_score(m0, m1):
    """Log marginal likelihood of one leaf's (m0, m1) outcome counts.

    BDe with a uniform equivalent-sample prior of 1 split across the two
    leaf states; accepts scalars or arrays.
    """
    return (
        -gammaln(1.0 + m0 + m1)
        + gammaln(0.5 + m0)
        - _LOG_GAMMA_HALF
        + gammaln(0.5 + m1)
        - _LOG_GAMMA_HALF
    )


def split_penalty(sample_size: int) -> float:
    """Complexity charge for one additional leaf parameter."""
    return 0.5 * math.log2(sample_size)


@dataclass
class TreeNode:
    """Decision tree node: a leaf with counts, or a test on one variable."""

    test_var: int | None = None
    low: "TreeNode | None" = None
    high: "TreeNode | None" = None
    m0: int = 0
    m1: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.test_var is None

    def probability_one(self) -> float:
        """Posterior mean of P(X=1) at a leaf (adds the 0.5 pseudo-counts)."""
        return (self.m1 + 0.5) / (self.m0 + self.m1 + 1.0)


@dataclass
class BayesNetModel:
    trees: list[TreeNode]  # index = target variable
    order: list[int]       # topological: every tested variable precedes its tester
    score: float = 0.0     # total leaf scores minus total complexity penalty

    @property
    def n(self) -> int:
        return len(self.trees)

    def dependency_edges(self) -> set[tuple[int, int]]:
        """Set of (target, tested) pairs appearing anywhere in the trees."""
        edges = set()
        for i, root in enumerate(self.trees):
            stack = [root]
            while stack:
                node = stack.pop()
                if not node.is_leaf:
                    edges.add((i, node.test_var))
                    stack.append(node.low)
                    stack.append(node.high)
        return edges


@dataclass
class Leaf:
    """Learning-time view of one leaf: target variable plus its data rows."""

    target: int
    rows: np.ndarray          # selected-population row indices reaching the leaf
    path_mask: int = 0        # bitmask of variables tested on the path
    node: TreeNode = field(default_factory=TreeNode)
    leaf_id: int = 0

    @property
    def m0(self) -> int:
        return self.node.m0

    @property
    def m1(self) -> int:
        return self.node.m1


def initial_leaf(selected, target: int) -> Leaf:
    """Single-leaf tree for `target` over the whole selected population."""
    bits = _as_bit_matrix(selected)
    ones = int(bits[:, target].sum())
    node = TreeNode(m0=bits.shape[0] - ones, m1=ones)
    return Leaf(target=target, rows=np.arange(bits.shape[0]), node=node)


def _as_bit_matrix(selected) -> np.ndarray:
    if isinstance(selected, np.ndarray):
        return np.asarray(selected, dtype=np.uint8)
    return np.array([g.bits for g in selected], dtype=np.uint8)


def _split_gains(leaf: Leaf, selected: np.ndarray, penalty: float) -> np.ndarray:
    """Net gain of splitting `leaf` on every candidate variable: (n,).

    Entries for the target itself and for variables already on the path
    are -inf; acyclicity is the caller's concern.
    """
    sub = selected[leaf.rows]
    i = leaf.target
    m_leaf = sub.shape[0]
    xi = sub[:, i] == 1
    ones_per_var = sub.sum(axis=0, dtype=np.int64)
    ones_with_xi = sub[xi].sum(axis=0, dtype=np.int64)
    m1_high = ones_with_xi
    m0_high = ones_per_var - ones_with_xi
    m1_low = int(xi.sum()) - ones_with_xi
    m0_low = (m_leaf - ones_per_var) - m1_low
    parent = leaf_score(leaf.m0, leaf.m1)
    gains = leaf_score(m0_low, m1_low) + leaf_score(m0_high, m1_high) - parent - penalty
    gains[i] = -np.inf
    mask = leaf.path_mask
    if mask:
        for j in range(selected.shape[1]):
            if (mask >> j) & 1:
                gains[j] = -np.inf
    return gains


def split_gain(leaf: Leaf, candidate_var: int, selected) -> float:
    """Net scoring gain of replacing `leaf` by a test on candidate_var."""
    bits = _as_bit_matrix(selected)
    if candidate_var == leaf.target or (leaf.path_mask >> candidate_var) & 1:
        raise ValueError("candidate variable already determines this leaf")
    penalty = split_penalty(bits.shape[0])
    return float(_split_gains(leaf, bits, penalty)[candidate_var])


def learn_model(selected, max_tree_vars: int | None = None) -> BayesNetModel:
    """Greedy decision-tree Bayesian network over the selected genomes.

    Starts from n single-leaf trees and repeatedly applies the globally
    best positive-gain split, keeping the dependency relation acyclic.
    Ties break on (lower target variable, lower tested variable, leaf
    creation order), so learning is deterministic.  max_tree_vars
    optionally caps the number of distinct variables tested per tree.
    """
    sel = _as_bit_matrix(selected)
    m, n = sel.shape
    if m == 0:
        raise ValueError("cannot learn a model from an empty selection")
    penalty = split_penalty(m)

    dep = [0] * n          # dep[i]: transitive bitmask of variables i depends on
    tree_vars = [0] * n    # distinct variables tested in tree i
    leaves: dict[int, Leaf] = {}
    next_id = 0
    heap: list[tuple[float, int, int, int]] = []

    def register(leaf: Leaf) -> None:
        nonlocal next_id
        leaf.leaf_id = next_id
        leaves[next_id] = leaf
        next_id += 1
        push_best(leaf)

    def push_best(leaf: Leaf) -> None:
        if leaf.rows.size == 0:
            return
        gains = _split_gains(leaf, sel, penalty)
        for j in range(n):
            if gains[j] <= 0.0:
                continue
            if _would_cycle(dep, leaf.target, j):
                gains[j] = -np.inf
            elif (
                max_tree_vars is not None
                and not (tree_vars[leaf.target] >> j) & 1
                and _popcount(tree_vars[leaf.target]) >= max_tree_vars
            ):
                gains[j] = -np.inf
        j = int(np.argmax(gains))
        if gains[j] > 0.0:
            heapq.heappush(heap, (-float(gains[j]), leaf.target, j, leaf.leaf_id))

    roots = []
    total_score = 0.0
    for i in range(n):
        leaf = initial_leaf(sel, i)
        roots.append(leaf.node)
        total_score += float(leaf_score(leaf.m0, leaf.m1))
        register(leaf)

    while heap:
        neg_gain, i, j, leaf_id = heapq.heappop(heap)
        leaf = leaves.get(leaf_id)
        if leaf is None:
            continue
        if _would_cycle(dep, i, j) or (
            max_tree_vars is not None
            and not (tree_vars[i] >> j) & 1
            and _popcount(tree_vars[i]) >= max_tree_vars
        ):
            push_best(leaf)  # constraints changed since this entry was queued
            continue

        del leaves[leaf_id]
        total_score += -neg_gain
        sub_j = sel[leaf.rows, j]
        rows_low = leaf.rows[sub_j == 0]
        rows_high = leaf.rows[sub_j == 1]
        node = leaf.node
        node.test_var = j
        low_ones = int(sel[rows_low, i].sum())
        high_ones = int(sel[rows_high, i].sum())
        node.low = TreeNode(m0=rows_low.size - low_ones, m1=low_ones)
        node.high = TreeNode(m0=rows_high.size - high_ones, m1=high_ones)
        node.m0 = node.m1 = 0
        path = leaf.path_mask | (1 << j)
        if not (dep[i] >> j) & 1:
            gained = dep[j] | (1 << j)
            dep[i] |= gained
            for a in range(n):
                if (dep[a] >> i) & 1:
                    dep[a] |= gained
        tree_vars[i] |= 1 << j
        register(Leaf(target=i, rows=rows_low, path_mask=path, node=node.low))
        register(Leaf(target=i, rows=rows_high, path_mask=path, node=node.high))

    return BayesNetModel(trees=roots, order=_topological_order(tree_vars), score=total_score)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _would_cycle(dep: list[int], target: int, tested: int) -> bool:
    return tested == target or bool((dep[tested] >> target) & 1)


def _topological_order(tree_vars: list[int]) -> list[int]:
    n = len(tree_vars)
    placed = 0
    order = []
    remaining = set(range(n))
    while remaining:
        ready = sorted(i for i in remaining if not (tree_vars[i] & ~placed))
        if not ready:
            raise AssertionError("dependency relation is cyclic")
        for i in ready:
            order.append(i)
            placed |= 1 << i
            remaining.discard(i)
    return order


def _sample_bits(model: BayesNetModel, count: int, rng: np.random.Generator) -> np.ndarray:
    """Ancestral sampling in topological order: (count, n) uint8."""
    n = model.n
    out = np.zeros((count, n), dtype=np.uint8)
    for i in model.order:
        probs = np.empty(count)
        _route(model.trees[i], np.arange(count), out, probs)
        out[:, i] = rng.random(count) < probs
    return out


def _route(node: TreeNode, idx: np.ndarray, sampled: np.ndarray, probs: np.ndarray) -> None:
    if node.is_leaf:
        probs[idx] = node.probability_one()
        return
    goes_high = sampled[idx, node.test_var] == 1
    _route(node.low, idx[~goes_high], sampled, probs)
    _route(node.high, idx[goes_high], sampled, probs)


def sample_model(model: BayesNetModel, count: int, rng: np.random.Generator):
    """Draw genomes from the model; leaf probabilities use posterior means."""
    from .landscape import Genome

    if count < 1:
        raise ValueError("count must be >= 1")
    bits = _sample_bits(model, count, rng)
    return [Genome(bits[i]) for i in range(count)]


def model_to_dict(model: BayesNetModel) -> dict:
    """JSON-friendly dump of the trees, for debugging."""

    def node_dict(node: TreeNode) -> dict:
        if node.is_leaf:
            return {"m0": node.m0, "m1": node.m1}
        return {
            "test_var": node.test_var,
            "low": node_dict(node.low),
            "high": node_dict(node.high),
        }

    return {
        "format_version": 1,
        "order": list(model.order),
        "trees": [node_dict(t) for t in model.trees],
    }
