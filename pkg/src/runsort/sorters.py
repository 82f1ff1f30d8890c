"""Stable, instrumented sorting algorithms.

All sorters share the same calling convention::

    metrics = peeksort(a, cfg, tags=tags)

where ``a`` is a numpy int64 array sorted in place, ``cfg`` a SortConfig and
``tags`` an optional parallel payload array used to observe stability.

peeksort      top-down natural mergesort; splits at the run boundary closest
              to the midpoint, mirroring the weight-balancing tree heuristic.
powersort     one-pass stack-based natural mergesort driven by node powers;
              its merge tree is the min-Cartesian tree of the power sequence.
top_down_mergesort / bottom_up_mergesort
              elementary baselines with an already-sorted check before each
              merge and insertion sort below the cutoff.
alpha_stack_sort / alpha_merge_sort
              stack-based baselines that merge by run-length ratio rules.

With ``min_run_len == 1`` and ``record_tree=True`` the recorded merge trees
coincide with the corresponding nearly-optimal alphabetic tree constructions
(weight balancing for peeksort, skipped bisection for powersort); the test
suite checks this structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .opttree import MergeLeaf, MergeNode
from .runcore import (
    Metrics,
    find_run_right,
    insertionsort_presorted,
    merge_runs_bitonic,
    merge_runs_classic,
    reverse_range,
    _scan_ascending,
    _scan_ascending_left,
    _scan_descending,
    _scan_descending_left,
)

__all__ = [
    "SortConfig",
    "peeksort",
    "powersort",
    "top_down_mergesort",
    "bottom_up_mergesort",
    "alpha_stack_sort",
    "alpha_merge_sort",
    "node_power_def",
    "node_power_bitwise",
    "SORTERS",
]

MERGE_KINDS = ("bitonic", "classic")


@dataclass(frozen=True)
class SortConfig:
    """Shared sorter knobs.

    min_run_len   runs shorter than this are extended by insertion sort
                  (stack-based sorts) or recursion bottoms out in insertion
                  sort (top-down sorts); 1 disables the cutoff entirely.
    merge_kind    "bitonic" (exactly m+n comparisons) or "classic"
                  (two-pointer, at most m+n-1).
    record_tree   record the merge tree into Metrics.merge_tree.
    alpha         growth ratio for the alpha-stack/alpha-merge rules.
    """

    min_run_len: int = 24
    merge_kind: str = "bitonic"
    record_tree: bool = False
    alpha: float = 2.0

    def __post_init__(self) -> None:
        if self.min_run_len < 1:
            raise ValueError("min_run_len must be >= 1")
        if self.merge_kind not in MERGE_KINDS:
            raise ValueError(f"merge_kind must be one of {MERGE_KINDS}")
        if not self.alpha > 1.0:
            raise ValueError("alpha must be > 1")


def _merge_fn(cfg: SortConfig) -> Callable:
    return merge_runs_bitonic if cfg.merge_kind == "bitonic" else merge_runs_classic


class _SortState:
    """Shared buffers and counters for one sort invocation."""

    __slots__ = ("a", "tags", "buf", "tag_buf", "metrics", "cfg", "merge", "merges")

    def __init__(self, a, cfg, metrics, tags):
        self.a = a
        self.tags = tags
        self.buf = np.empty_like(a)
        self.tag_buf = np.empty_like(tags) if tags is not None else None
        self.metrics = metrics
        self.cfg = cfg
        self.merge = _merge_fn(cfg)
        self.merges = 0

    def do_merge(self, l: int, m: int, r: int):
        self.merge(self.a, l, m, r, self.buf, self.metrics, self.tags, self.tag_buf)
        self.merges += 1


def _leaf(st: _SortState, l: int, r: int):
    if not st.cfg.record_tree:
        return None
    return MergeLeaf(-1, r - l + 1)


def _node(st: _SortState, left, right, l: int, r: int, power: Optional[int] = None):
    if not st.cfg.record_tree:
        return None
    return MergeNode(left, right, size=r - l + 1, power=power)


def _renumber_leaves(tree):
    """Rewrite leaf indices to in-order positions 0..r-1."""
    counter = 0

    def walk(node):
        nonlocal counter
        if isinstance(node, MergeLeaf):
            leaf = MergeLeaf(counter, node.length)
            counter += 1
            return leaf
        return MergeNode(walk(node.left), walk(node.right),
                         size=node.size, power=node.power)

    return walk(tree)


# ---------------------------------------------------------------------------
# Peeksort


def peeksort(
    a: np.ndarray,
    cfg: Optional[SortConfig] = None,
    metrics: Optional[Metrics] = None,
    tags: Optional[np.ndarray] = None,
) -> Metrics:
    """Stable natural mergesort that peeks at the run around the midpoint.

    Sorting A[l..r] whose prefix A[l..e] and suffix A[s..r] are known runs:
    if the midpoint lies in one of those runs the split is at that run's far
    boundary; otherwise the run containing the midpoint is detected and the
    split goes to whichever of its two boundaries is closer to the midpoint
    (ties attach the middle run to the left part).

    Two refinements keep every split on a maximal run boundary and every
    adjacent pair compared at most once across the whole sort: known edge
    runs are extended to maximal before an edge split, and each recursive
    call carries a flag per edge run recording whether the pair just outside
    it is already known to descend (so it is never re-compared).
    """
    cfg = cfg or SortConfig()
    metrics = metrics or Metrics()
    n = len(a)
    if n <= 1:
        metrics.runs_detected = n
        if cfg.record_tree and n == 1:
            metrics.merge_tree = MergeLeaf(0, 1)
        return metrics
    st = _SortState(a, cfg, metrics, tags)
    w = cfg.min_run_len

    first = find_run_right(a, 0, n - 1, metrics, tags)
    e0 = first.end

    def scan_asc_right(start, bound):
        """Ascending end from `start`, pairs counted like the scalar scan."""
        j = _scan_ascending(a, start, bound)
        metrics.comparisons += (j - start + 1) if j < bound else (j - start)
        return j

    def scan_asc_left(start, bound):
        i = _scan_ascending_left(a, start, bound)
        metrics.comparisons += (start - i + 1) if i > bound else (start - i)
        return i

    def scan_desc_right(start, bound):
        j = _scan_descending(a, start, bound)
        metrics.comparisons += (j - start + 1) if j < bound else (j - start)
        return j

    def scan_desc_left(start, bound):
        i = _scan_descending_left(a, start, bound)
        metrics.comparisons += (start - i + 1) if i > bound else (start - i)
        return i

    def extend_prefix(e, r, s, e_desc, s_desc):
        """Maximal end of the increasing run [l..e]; r means the whole range."""
        if e_desc or e == r:
            return e
        metrics.comparisons += 1
        if a[e] > a[e + 1]:
            return e
        if e + 1 == s:
            return r  # continues straight into the known suffix run
        E = scan_asc_right(e + 1, s - 1)
        if E == s - 1 and not s_desc:
            metrics.comparisons += 1
            if a[s - 1] <= a[s]:
                return r
        return E

    def extend_suffix(s, l, e, s_desc, e_desc):
        """Maximal start of the increasing run [s..r]; l means the whole range."""
        if s_desc or s == l:
            return s
        metrics.comparisons += 1
        if a[s - 1] > a[s]:
            return s
        if s - 1 == e:
            return l
        S = scan_asc_left(s - 1, e + 1)
        if S == e + 1 and not e_desc:
            metrics.comparisons += 1
            if a[e] <= a[e + 1]:
                return l
        return S

    def probe(m, l, r, e, s, e_desc, s_desc):
        """Run [i..j] around position m (e < m < s), reversed if decreasing.

        Prefers the weakly increasing reading: an increasing run around m,
        else the increasing run ending at m, else the strictly decreasing
        chain through m.  Returns (i, j, i_desc, j_desc) where the flags say
        whether the pairs (i-1, i) and (j, j+1) are known descents afterwards.
        """
        if m + 1 == s and s_desc:
            asc_right = False
        else:
            metrics.comparisons += 1
            asc_right = bool(a[m] <= a[m + 1])
        if asc_right:
            if m + 1 == s:
                j = r
            else:
                j = scan_asc_right(m + 1, s - 1)
                if j == s - 1 and not s_desc:
                    metrics.comparisons += 1
                    if a[s - 1] <= a[s]:
                        j = r
            i = scan_asc_left(m, e + 1)
            if i == e + 1 and not e_desc:
                metrics.comparisons += 1
                if a[e] <= a[e + 1]:
                    i = l
            return i, j, True, True
        if m - 1 == e and e_desc:
            asc_left = False
        else:
            metrics.comparisons += 1
            asc_left = bool(a[m - 1] <= a[m])
        if asc_left:
            # m ends a weakly increasing run
            if m - 1 == e:
                return l, m, True, True  # (e, e+1) ascends: prefix absorbed
            i = scan_asc_left(m - 1, e + 1)
            if i == e + 1 and not e_desc:
                metrics.comparisons += 1
                if a[e] <= a[e + 1]:
                    i = l
            return i, m, True, True
        # strictly decreasing chain through (m, m+1) (and (m-1, m) if outside
        # the prefix run; a multi-element increasing prefix keeps its last key)
        if m - 1 > e:
            i = scan_desc_left(m - 1, e + 1)
            if i == e + 1 and l == e:
                if e_desc:
                    i = l
                else:
                    metrics.comparisons += 1
                    if a[e] > a[e + 1]:
                        i = l
        elif l == e:
            i = l
        else:
            i = m
        if m + 1 == s:
            j = r if s == r else s
        else:
            j = scan_desc_right(m + 1, s - 1)
            if j == s - 1 and s == r:
                if s_desc:
                    j = r
                else:
                    metrics.comparisons += 1
                    if a[s - 1] > a[s]:
                        j = r
        reverse_range(a, i, j, tags)
        return i, j, False, False

    def sort(l, r, e, s, e_desc, s_desc):
        """Sort a[l..r]; [l..e] and [s..r] are known (possibly understated)
        increasing runs; e_desc/s_desc record known descents just past them."""
        if e == r or s == l:
            return _leaf(st, l, r)
        if r - l + 1 <= w:
            insertionsort_presorted(a, l, r, e - l + 1, metrics, tags)
            return _leaf(st, l, r)
        m = l + (r - l) // 2
        if m <= e:
            E = extend_prefix(e, r, s, e_desc, s_desc)
            if E == r:
                return _leaf(st, l, r)
            right = sort(E + 1, r, E + 1, s, False, s_desc)
            st.do_merge(l, E + 1, r)
            return _node(st, _leaf(st, l, E), right, l, r)
        if m >= s:
            S = extend_suffix(s, l, e, s_desc, e_desc)
            if S == l:
                return _leaf(st, l, r)
            left = sort(l, S - 1, e, S - 1, e_desc, False)
            st.do_merge(l, S, r)
            return _node(st, left, _leaf(st, S, r), l, r)
        i, j, i_desc, j_desc = probe(m, l, r, e, s, e_desc, s_desc)
        if i == l and j == r:
            return _leaf(st, l, r)
        # Split at whichever boundary of [i..j] is closer to the weighted
        # midpoint of [l..r]; exact ties take the left boundary, matching the
        # weight-balancing tree rule for every range parity.
        if i + j >= l + r:
            left = sort(l, i - 1, e, i - 1, e_desc, False)
            if s > j:
                right = sort(i, r, j, s, j_desc, s_desc)
            else:
                # the detected run absorbed the suffix head; its tail remains
                right = sort(i, r, j, min(j + 1, r), j_desc, False)
            st.do_merge(l, i, r)
        else:
            left = sort(l, j, e, i, e_desc, i_desc)
            if s > j + 1:
                right = sort(j + 1, r, j + 1, s, False, s_desc)
            else:
                right = sort(j + 1, r, j + 1, j + 1, False, j_desc)
            st.do_merge(l, j + 1, r)
        return _node(st, left, right, l, r)

    if e0 == n - 1:
        tree = _leaf(st, 0, n - 1)
    elif n <= w:
        insertionsort_presorted(a, 0, n - 1, e0 + 1, metrics, tags)
        tree = _leaf(st, 0, n - 1)
    else:
        tree = sort(0, n - 1, e0, n - 1, not first.descending, False)
    metrics.runs_detected = st.merges + 1
    if cfg.record_tree:
        metrics.merge_tree = _renumber_leaves(tree)
    return metrics


# ---------------------------------------------------------------------------
# Node powers


def _validate_power_args(s1: int, e1: int, s2: int, e2: int, n: int) -> None:
    if not (1 <= s1 <= e1 < s2 <= e2 <= n):
        raise ValueError(
            f"invalid run positions: need 1 <= s1 <= e1 < s2 <= e2 <= n, "
            f"got ({s1}, {e1}, {s2}, {e2}, {n})"
        )


def node_power_def(s1: int, e1: int, s2: int, e2: int, n: int) -> int:
    """Power of the boundary between runs A[s1..e1] and A[s2..e2] (1-based).

    Smallest l >= 1 such that the normalized run midpoints
    a = (s1 + n1/2 - 1)/n and b = (s2 + n2/2 - 1)/n fall into different
    cells of the 2**-l grid.  Exact integer arithmetic, any n.
    """
    _validate_power_args(s1, e1, s2, e2, n)
    n1 = e1 - s1 + 1
    n2 = e2 - s2 + 1
    a2 = 2 * (s1 - 1) + n1  # 2n * a
    b2 = 2 * (s2 - 1) + n2  # 2n * b
    two_n = 2 * n
    level = 1
    while (a2 << level) // two_n == (b2 << level) // two_n:
        level += 1
    return level


def node_power_bitwise(s1: int, e1: int, s2: int, e2: int, n: int) -> int:
    """Loop-free node power via 31-bit fixed point and xor of the fractions.

    Truncating the midpoints to 31 fractional bits is exact for n < 2**31
    because powers never exceed floor(lg n) + 1.
    """
    _validate_power_args(s1, e1, s2, e2, n)
    if n >= 1 << 31:
        raise ValueError("bitwise node power supports n < 2**31 only")
    n1 = e1 - s1 + 1
    n2 = e2 - s2 + 1
    l = 2 * (s1 - 1) + n1
    r = 2 * (s2 - 1) + n2
    two_n = 2 * n
    afix = (l << 31) // two_n
    bfix = (r << 31) // two_n
    return 32 - (afix ^ bfix).bit_length()


def _node_power0(s1: int, e1: int, s2: int, e2: int, n: int) -> int:
    """Node power for 0-based adjacent runs, sized for the array at hand."""
    if n < 1 << 31:
        l = s1 + s2
        r = s2 + e2 + 1
        two_n = 2 * n
        afix = (l << 31) // two_n
        bfix = (r << 31) // two_n
        return 32 - (afix ^ bfix).bit_length()
    return node_power_def(s1 + 1, e1 + 1, s2 + 1, e2 + 1, n)


# ---------------------------------------------------------------------------
# Powersort


def powersort(
    a: np.ndarray,
    cfg: Optional[SortConfig] = None,
    metrics: Optional[Metrics] = None,
    tags: Optional[np.ndarray] = None,
) -> Metrics:
    """One-pass stack-based natural mergesort driven by node powers.

    Runs are detected left to right; each new boundary's power tells how deep
    its merge node sits.  Pending runs live in an array indexed by power
    (capacity floor(lg n) + 1): a smaller power closes all deeper slots, so
    occupied powers are strictly increasing bottom to top at all times.
    """
    cfg = cfg or SortConfig()
    metrics = metrics or Metrics()
    n = len(a)
    if n <= 1:
        metrics.runs_detected = n
        if cfg.record_tree and n == 1:
            metrics.merge_tree = MergeLeaf(0, 1)
        return metrics
    st = _SortState(a, cfg, metrics, tags)
    w = cfg.min_run_len
    record = cfg.record_tree

    max_power = n.bit_length()  # floor(lg n) + 1
    run_start = [-1] * (max_power + 1)
    run_end = [-1] * (max_power + 1)
    node_stack = [None] * (max_power + 1) if record else None
    top = 0
    occupied = 0

    def detect(start: int):
        run = find_run_right(a, start, n - 1, metrics, tags)
        metrics.runs_detected += 1
        end = run.end
        length = end - start + 1
        if length < w:
            end = min(n - 1, start + w - 1)
            insertionsort_presorted(a, start, end, length, metrics, tags)
        return start, end

    s1, e1 = detect(0)
    cur_node = _leaf(st, s1, e1)
    while e1 < n - 1:
        s2, e2 = detect(e1 + 1)
        next_node = _leaf(st, s2, e2)
        p = _node_power0(s1, e1, s2, e2, n)
        for level in range(top, p, -1):
            if run_start[level] < 0:
                continue
            if run_end[level] + 1 != s1:
                raise AssertionError("pending runs must be adjacent")
            st.do_merge(run_start[level], s1, e1)
            if record:
                cur_node = MergeNode(node_stack[level], cur_node,
                                     size=e1 - run_start[level] + 1, power=level)
                node_stack[level] = None
            s1 = run_start[level]
            run_start[level] = -1
            occupied -= 1
        if run_start[p] >= 0:
            raise AssertionError(
                "node power repeated on the run stack; power monotonicity violated"
            )
        run_start[p] = s1
        run_end[p] = e1
        if record:
            node_stack[p] = cur_node
            cur_node = next_node
        occupied += 1
        if occupied > metrics.max_stack_height:
            metrics.max_stack_height = occupied
        top = p
        s1, e1 = s2, e2
    for level in range(top, 0, -1):
        if run_start[level] < 0:
            continue
        if run_end[level] + 1 != s1:
            raise AssertionError("pending runs must be adjacent")
        st.do_merge(run_start[level], s1, n - 1)
        if record:
            cur_node = MergeNode(node_stack[level], cur_node,
                                 size=n - run_start[level], power=level)
        s1 = run_start[level]
        run_start[level] = -1
        occupied -= 1
    if cfg.record_tree:
        metrics.merge_tree = _renumber_leaves(cur_node)
    return metrics


# ---------------------------------------------------------------------------
# Elementary baselines


def top_down_mergesort(
    a: np.ndarray,
    cfg: Optional[SortConfig] = None,
    metrics: Optional[Metrics] = None,
    tags: Optional[np.ndarray] = None,
) -> Metrics:
    """Plain top-down mergesort: midpoint split, insertion sort below the
    cutoff, and one comparison to skip the merge when already in order."""
    cfg = cfg or SortConfig()
    metrics = metrics or Metrics()
    n = len(a)
    if n <= 1:
        return metrics
    st = _SortState(a, cfg, metrics, tags)
    w = cfg.min_run_len

    def sort(l, r):
        if r - l + 1 <= w:
            insertionsort_presorted(a, l, r, 1, metrics, tags)
            return
        m = l + (r - l) // 2
        sort(l, m)
        sort(m + 1, r)
        metrics.comparisons += 1
        if a[m] <= a[m + 1]:
            return
        st.do_merge(l, m + 1, r)

    sort(0, n - 1)
    return metrics


def bottom_up_mergesort(
    a: np.ndarray,
    cfg: Optional[SortConfig] = None,
    metrics: Optional[Metrics] = None,
    tags: Optional[np.ndarray] = None,
) -> Metrics:
    """Plain bottom-up mergesort: sort chunks of min_run_len by insertion,
    then merge passes of doubling width with the same skip check."""
    cfg = cfg or SortConfig()
    metrics = metrics or Metrics()
    n = len(a)
    if n <= 1:
        return metrics
    st = _SortState(a, cfg, metrics, tags)
    w = cfg.min_run_len
    if w > 1:
        for c in range(0, n, w):
            insertionsort_presorted(a, c, min(c + w, n) - 1, 1, metrics, tags)
    width = w
    while width < n:
        for l in range(0, n - width, 2 * width):
            m = l + width
            r = min(l + 2 * width - 1, n - 1)
            metrics.comparisons += 1
            if a[m - 1] <= a[m]:
                continue
            st.do_merge(l, m, r)
        width *= 2
    return metrics


# ---------------------------------------------------------------------------
# Stack-based baselines from the adaptive-sorting literature


def _stack_natural_sort(a, cfg, metrics, tags, pre_push_rule: bool) -> Metrics:
    n = len(a)
    if n <= 1:
        metrics.runs_detected = n
        return metrics
    st = _SortState(a, cfg, metrics, tags)
    w = cfg.min_run_len
    alpha = cfg.alpha
    stack: list[tuple[int, int]] = []  # (start, end), adjacent, left to right

    def detect(start: int):
        run = find_run_right(a, start, n - 1, metrics, tags)
        metrics.runs_detected += 1
        end = run.end
        length = end - start + 1
        if length < w:
            end = min(n - 1, start + w - 1)
            insertionsort_presorted(a, start, end, length, metrics, tags)
        return start, end

    def merge_top_two():
        s2, e2 = stack.pop()
        s1, e1 = stack.pop()
        st.do_merge(s1, s2, e2)
        stack.append((s1, e2))

    pos = 0
    while pos < n:
        s, e = detect(pos)
        if pre_push_rule:
            # grow the stack top until it is at least as long as the new run
            while len(stack) >= 2 and stack[-1][1] - stack[-1][0] + 1 < e - s + 1:
                merge_top_two()
        stack.append((s, e))
        while len(stack) >= 2:
            len_below = stack[-2][1] - stack[-2][0] + 1
            len_top = stack[-1][1] - stack[-1][0] + 1
            if len_below < alpha * len_top:
                merge_top_two()
            else:
                break
        if len(stack) > metrics.max_stack_height:
            metrics.max_stack_height = len(stack)
        pos = e + 1
    # cleanup: merge remaining runs left to right off the stack
    while len(stack) >= 2:
        s1, e1 = stack.pop(0)
        s2, e2 = stack.pop(0)
        st.do_merge(s1, s2, e2)
        stack.insert(0, (s1, e2))
    return metrics


def alpha_stack_sort(
    a: np.ndarray,
    cfg: Optional[SortConfig] = None,
    metrics: Optional[Metrics] = None,
    tags: Optional[np.ndarray] = None,
) -> Metrics:
    """Merge the topmost two runs until stack lengths grow by factor alpha."""
    cfg = cfg or SortConfig()
    metrics = metrics or Metrics()
    return _stack_natural_sort(a, cfg, metrics, tags, pre_push_rule=False)


def alpha_merge_sort(
    a: np.ndarray,
    cfg: Optional[SortConfig] = None,
    metrics: Optional[Metrics] = None,
    tags: Optional[np.ndarray] = None,
) -> Metrics:
    """alpha-stack rule plus pre-merging the stack top up to the new run's
    length before pushing, avoiding badly imbalanced late merges."""
    cfg = cfg or SortConfig()
    metrics = metrics or Metrics()
    return _stack_natural_sort(a, cfg, metrics, tags, pre_push_rule=True)


SORTERS = {
    "peeksort": peeksort,
    "powersort": powersort,
    "top-down": top_down_mergesort,
    "bottom-up": bottom_up_mergesort,
    "alpha-stack": alpha_stack_sort,
    "alpha-merge": alpha_merge_sort,
}
