"""Nearly-optimal alphabetic trees over leaf weights, and merge-cost analysis.

An alphabetic (order-preserving) binary tree over leaves 0..m doubles as a
merge tree over m+1 adjacent sorted runs: internal node j (1-based, in
in-order position) separates leaf j-1 from leaf j, and the cost of the tree
is the weighted external path length ``C = sum(alpha_i * depth_i)``.  When
``alpha_i = L_i / n`` for integer run lengths, ``C * n`` is exactly the merge
cost of executing the tree's merges bottom-up.

Two greedy top-down constructions are provided:

* ``method1_tree``  -- weight balancing: split at the leaf boundary closest
  to the midpoint of the subtree's own weight interval.
* ``method2_tree``  -- bisection: split at fixed dyadic cut points of the
  *original* unit interval, halving the cut step on every level.
* ``method2prime_tree`` -- bisection with out-of-range cut points skipped
  instead of clamped.  Its internal nodes carry "powers" (the dyadic level
  that created them), which strictly increase along every root-to-leaf path,
  so the whole tree is the min-oriented Cartesian tree of the power sequence.

All structure-determining comparisons are done in exact integer arithmetic
(weights are stored as integer numerators over a common denominator), so the
trees are deterministic and immune to float rounding.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

__all__ = [
    "WeightVector",
    "MergeLeaf",
    "MergeNode",
    "MergeTree",
    "TreeCost",
    "entropy",
    "method1_tree",
    "method2_tree",
    "method2prime_tree",
    "node_powers",
    "cartesian_tree_min",
    "tree_cost",
    "optimal_tree_cost",
    "merge_cost_of_tree",
    "leaves",
    "internal_nodes_inorder",
    "leaf_depths",
]

# The exact-optimum oracle is a cubic dynamic program; keep it at desk scale.
MAX_OPTIMAL_LEAVES = 256


@dataclass(frozen=True)
class MergeLeaf:
    """Leaf i of a merge tree.  ``length`` is metadata (run length or weight)."""

    index: int
    length: object = field(default=None, compare=False)


@dataclass(frozen=True)
class MergeNode:
    """Internal node; ``size``/``power`` are metadata, equality is shape-only."""

    left: "MergeTree"
    right: "MergeTree"
    size: object = field(default=None, compare=False)
    power: Optional[int] = field(default=None, compare=False)


MergeTree = Union[MergeLeaf, MergeNode]


class WeightVector:
    """Positive leaf weights alpha_0..alpha_m stored as exact rationals.

    ``nums[i] / den`` is alpha_i with ``sum(nums) == den``, so the weights sum
    to exactly 1 after construction.  ``lengths`` is kept when the vector was
    derived from integer run lengths (then ``den == n``).
    """

    __slots__ = ("nums", "den", "lengths", "_cums", "_mids")

    def __init__(self, nums: Sequence[int], den: int, lengths=None):
        nums = tuple(int(x) for x in nums)
        if not nums:
            raise ValueError("weight vector must have at least one leaf")
        if any(x <= 0 for x in nums):
            raise ValueError("all weights must be positive")
        if sum(nums) != den:
            raise ValueError("numerators must sum to the denominator")
        self.nums = nums
        self.den = int(den)
        self.lengths = tuple(int(L) for L in lengths) if lengths is not None else None
        cums = []
        acc = 0
        for x in nums:
            acc += x
            cums.append(acc)
        self._cums = tuple(cums)  # prefix sums over den
        # leaf midpoints over 2*den: mid_i = cum_i - alpha_i/2
        self._mids = tuple(2 * c - x for c, x in zip(cums, nums))

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "WeightVector":
        lengths = tuple(int(L) for L in lengths)
        if any(L < 1 for L in lengths):
            raise ValueError("run lengths must be >= 1")
        return cls(lengths, sum(lengths), lengths=lengths)

    @classmethod
    def from_probs(cls, probs: Iterable[float], tol: float = 1e-9) -> "WeightVector":
        fracs = [Fraction(p) for p in probs]
        if any(f <= 0 for f in fracs):
            raise ValueError("all probabilities must be positive")
        total = sum(fracs)
        if abs(float(total) - 1.0) > tol:
            raise ValueError(f"probabilities sum to {float(total)}, expected 1")
        # Renormalize exactly onto a common denominator.
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fracs]
        return cls(nums, sum(nums))

    @property
    def m(self) -> int:
        """Index of the last leaf (m+1 leaves, m internal boundaries)."""
        return len(self.nums) - 1

    @property
    def alphas(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.nums)

    def alpha_min(self) -> float:
        return min(self.nums) / self.den

    def leaf_meta(self, i: int):
        if self.lengths is not None:
            return self.lengths[i]
        return Fraction(self.nums[i], self.den)

    def __len__(self) -> int:
        return len(self.nums)

    def __repr__(self) -> str:
        if self.lengths is not None:
            return f"WeightVector.from_lengths({list(self.lengths)})"
        return f"WeightVector({self.nums!r}, {self.den!r})"


def _as_weights(weights) -> WeightVector:
    if isinstance(weights, WeightVector):
        return weights
    seq = list(weights)
    if seq and all(isinstance(x, (int, np.integer)) for x in seq):
        return WeightVector.from_lengths(seq)
    return WeightVector.from_probs(seq)


def entropy(weights) -> float:
    """Binary Shannon entropy sum p_i * lg(1/p_i) of the weight vector."""
    w = _as_weights(weights)
    return float(sum(-(x / w.den) * math.log2(x / w.den) for x in w.nums))


# ---------------------------------------------------------------------------
# Method 1: weight balancing


def method1_tree(weights) -> MergeTree:
    """Recursive weight-balanced tree: split closest to the local midpoint.

    Ties between two equidistant boundaries go to the left one.
    """
    w = _as_weights(weights)
    cums = w._cums

    def build(i: int, j: int, lo: int, hi: int) -> MergeTree:
        if i == j:
            return MergeLeaf(i, w.leaf_meta(i))
        target2 = lo + hi  # 2 * weighted midpoint
        # boundary k sits at cumulative weight cums[k-1]; pick the closest
        best_k = i + 1
        best_d = abs(2 * cums[i] - target2)
        for k in range(i + 2, j + 1):
            d = abs(2 * cums[k - 1] - target2)
            if d < best_d:
                best_d = d
                best_k = k
        cut = cums[best_k - 1]
        left = build(i, best_k - 1, lo, cut)
        right = build(best_k, j, cut, hi)
        return MergeNode(left, right, size=_span_meta(w, i, j))

    return build(0, w.m, 0, w.den)


def _span_meta(w: WeightVector, i: int, j: int):
    if w.lengths is not None:
        return sum(w.lengths[i : j + 1])
    return Fraction(sum(w.nums[i : j + 1]), w.den)


# ---------------------------------------------------------------------------
# Method 2 and Method 2': bisection of the original interval


def _bisection_tree(w: WeightVector, skip_out_of_range: bool) -> MergeTree:
    """Common recursion for the bisection heuristics.

    State is the current dyadic cut ``cnum / 2**level`` (an even numerator by
    construction, so ``[cut, cut + 2**-(level-1)]`` is an aligned dyadic cell).
    The candidate split point is ``cut + 2**-level``.  Leaf boundaries are
    compared against it through the leaf midpoints ``mids[t] / (2*den)``.
    """
    mids = w._mids
    two_den = 2 * w.den

    def build(i: int, j: int, cnum: int, level: int) -> MergeTree:
        if i == j:
            return MergeLeaf(i, w.leaf_meta(i))
        # cutpoint = (cnum + 1) / 2**level; compare mids[t]/two_den against it
        cp = (cnum + 1) * two_den  # cutpoint * two_den * 2**level
        shift = level
        if skip_out_of_range:
            if (mids[j] << shift) < cp:
                # whole range left of the cut point: halve again (case L)
                return build(i, j, 2 * cnum, level + 1)
            if cp <= (mids[i] << shift):
                # whole range at/right of the cut point: advance it (case R)
                return build(i, j, 2 * (cnum + 1), level + 1)
            k = _split_index(mids, i, j, cp, shift)
        else:
            if (mids[j] << shift) < cp:
                k = j  # clamp to the rightmost boundary
            elif cp <= (mids[i] << shift):
                k = i + 1  # clamp to the leftmost boundary
            else:
                k = _split_index(mids, i, j, cp, shift)
        left = build(i, k - 1, 2 * cnum, level + 1)
        right = build(k, j, 2 * (cnum + 1), level + 1)
        power = level if skip_out_of_range else None
        return MergeNode(left, right, size=_span_meta(w, i, j), power=power)

    return build(0, w.m, 0, 1)


def _split_index(mids, i: int, j: int, cp: int, shift: int) -> int:
    """Smallest k in (i, j] with mids[k]*2**shift >= cp (cp > mids[i]*2**shift)."""
    # mids is increasing; integer threshold: mids[k] >= ceil(cp / 2**shift)
    thr = -((-cp) >> shift)
    k = bisect_left(mids, thr, i + 1, j + 1)
    return k


def method2_tree(weights) -> MergeTree:
    """Bisection heuristic: strictly halve the original interval each level.

    Out-of-range cut points are clamped to the nearest boundary of the range.
    """
    return _bisection_tree(_as_weights(weights), skip_out_of_range=False)


def method2prime_tree(weights) -> MergeTree:
    """Bisection with void cut points skipped rather than clamped.

    Internal nodes are annotated with their power (the level at which they
    were created); powers strictly increase along root-to-leaf paths.
    """
    return _bisection_tree(_as_weights(weights), skip_out_of_range=True)


# ---------------------------------------------------------------------------
# Node powers and the Cartesian-tree view


def node_powers(weights) -> list[int]:
    """Power P_j of each boundary j = 1..m.

    P_j is the first binary fractional position at which the midpoints of
    leaves j-1 and j fall into different dyadic cells, i.e. the smallest
    l >= 1 with  floor(a * 2**l) < floor(b * 2**l)  for
    a = mid(j-1), b = mid(j).
    """
    w = _as_weights(weights)
    if w.m < 1:
        return []
    mids = w._mids
    two_den = 2 * w.den
    powers = []
    for j in range(1, w.m + 1):
        a, b = mids[j - 1], mids[j]
        level = 1
        while (a << level) // two_den == (b << level) // two_den:
            level += 1
        powers.append(level)
    return powers


def cartesian_tree_min(powers: Sequence[int]) -> MergeTree:
    """Min-oriented Cartesian tree of a power sequence, built left to right.

    Node j (1-based) separates leaves j-1 and j.  The stack holds the right
    spine; a new node pops strictly greater powers, adopting the last popped
    node as its left subtree, so an equal-power later node becomes a right
    descendant of the earlier one.
    """
    m = len(powers)
    if m == 0:
        raise ValueError("power sequence must be non-empty")
    left_child = [0] * (m + 1)  # 0 = absent
    right_child = [0] * (m + 1)
    stack: list[int] = []
    for j in range(1, m + 1):
        last = 0
        while stack and powers[stack[-1] - 1] > powers[j - 1]:
            last = stack.pop()
        left_child[j] = last
        if stack:
            right_child[stack[-1]] = j
        stack.append(j)

    def freeze(j: int) -> MergeTree:
        left = freeze(left_child[j]) if left_child[j] else MergeLeaf(j - 1)
        right = freeze(right_child[j]) if right_child[j] else MergeLeaf(j)
        return MergeNode(left, right, power=int(powers[j - 1]))

    return freeze(stack[0])


# ---------------------------------------------------------------------------
# Costs


@dataclass(frozen=True)
class TreeCost:
    """Expected search depth C and, when run lengths are known, M = C*n."""

    search_cost: float
    merge_cost: Optional[int] = None


def leaves(tree: MergeTree) -> list[MergeLeaf]:
    """Leaves in in-order (left to right)."""
    out: list[MergeLeaf] = []

    def walk(node: MergeTree) -> None:
        if isinstance(node, MergeLeaf):
            out.append(node)
        else:
            walk(node.left)
            walk(node.right)

    walk(tree)
    return out


def internal_nodes_inorder(tree: MergeTree) -> list[MergeNode]:
    out: list[MergeNode] = []

    def walk(node: MergeTree) -> None:
        if isinstance(node, MergeNode):
            walk(node.left)
            out.append(node)
            walk(node.right)

    walk(tree)
    return out


def leaf_depths(tree: MergeTree) -> list[int]:
    """Depths of the leaves in in-order (root has depth 0)."""
    out: list[int] = []

    def walk(node: MergeTree, d: int) -> None:
        if isinstance(node, MergeLeaf):
            out.append(d)
        else:
            walk(node.left, d + 1)
            walk(node.right, d + 1)

    walk(tree, 0)
    return out


def tree_cost(tree: MergeTree, weights) -> TreeCost:
    """Weighted depth C = sum alpha_i d_i; M = sum L_i d_i when lengths known."""
    w = _as_weights(weights)
    depths = leaf_depths(tree)
    if len(depths) != len(w):
        raise ValueError(
            f"tree has {len(depths)} leaves but weight vector has {len(w)}"
        )
    num = sum(x * d for x, d in zip(w.nums, depths))
    cost = TreeCost(search_cost=num / w.den)
    if w.lengths is not None:
        cost = TreeCost(search_cost=num / w.den,
                        merge_cost=sum(L * d for L, d in zip(w.lengths, depths)))
    return cost


def merge_cost_of_tree(tree: MergeTree, run_lengths: Sequence[int]) -> int:
    """Total merge cost: sum of subtree sizes over all internal nodes."""
    run_lengths = [int(L) for L in run_lengths]
    n_leaves = len(leaves(tree))
    if n_leaves != len(run_lengths):
        raise ValueError(
            f"tree has {n_leaves} leaves but {len(run_lengths)} lengths given"
        )
    it = iter(run_lengths)
    total = 0

    def walk(node: MergeTree) -> int:
        nonlocal total
        if isinstance(node, MergeLeaf):
            return next(it)
        size = walk(node.left) + walk(node.right)
        total += size
        return size

    walk(tree)
    return total


def optimal_tree_cost(weights) -> TreeCost:
    """Exact minimum search cost over all alphabetic trees (interval DP).

    Cubic in the number of leaves; refuses vectors beyond MAX_OPTIMAL_LEAVES.
    """
    w = _as_weights(weights)
    r = len(w)
    if r > MAX_OPTIMAL_LEAVES:
        raise ValueError(f"optimal-tree DP limited to {MAX_OPTIMAL_LEAVES} leaves")
    if r == 1:
        return TreeCost(0.0, 0 if w.lengths is not None else None)
    # cost[i, j]: optimal weighted depth sum (un-normalized) over leaves i..j,
    # computed diagonal by diagonal; integer weights keep the DP exact
    exact = w.lengths is not None and sum(w.lengths) < 1 << 40
    nums = np.array(w.nums if exact else [x / w.den for x in w.nums],
                    dtype=np.int64 if exact else np.float64)
    pref = np.concatenate([[0], np.cumsum(nums)])
    cost = np.zeros((r, r), dtype=nums.dtype)
    for d in range(1, r):
        i = np.arange(r - d)
        j = i + d
        t = np.arange(d)
        # candidate split after leaf i+t: cost[i, i+t] + cost[i+t+1, j]
        cand = cost[i[:, None], i[:, None] + t[None, :]] \
            + cost[i[:, None] + t[None, :] + 1, j[:, None]]
        cost[i, j] = cand.min(axis=1) + (pref[j + 1] - pref[i])
    total = cost[0, r - 1]
    if exact:
        return TreeCost(int(total) / w.den, int(total))
    c_star = float(total)
    m_star = int(round(c_star * w.den)) if w.lengths is not None else None
    return TreeCost(c_star, m_star)
