"""Array-level primitives shared by all sorters.

Arrays are numpy int64 key arrays, mutated in place.  An optional parallel
``tags`` array is moved through every rearrangement identically to the keys;
giving each element its original index as a tag is how stability is observed
(equal keys must keep increasing tags).  Comparisons never look at tags.

Counter semantics match the straightforward element-at-a-time routines:
the vectorized implementations compute analytically how many key comparisons
the scalar loop would have made, so ``Metrics.comparisons`` is exact, not an
estimate.  Merge cost is the output size of every executed merge.

Run convention: a run is a maximal weakly increasing segment, or a maximal
strictly decreasing segment, which is reversed in place on detection
(strictness means no equal keys can be reordered by the reversal).

Nothing here touches global state; every operation confines itself to the
arrays it is given, so distinct arrays can be sorted concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "Metrics",
    "Run",
    "reverse_range",
    "find_run_right",
    "extend_run_around",
    "insertionsort_presorted",
    "merge_runs_bitonic",
    "merge_runs_classic",
]


@dataclass
class Metrics:
    """Instrumentation counters for one sort invocation.

    merge_cost        sum of output sizes over all executed merges
    comparisons       key comparisons (run detection + merging + insertion)
    runs_detected     number of leaves the sorter worked from
    max_stack_height  peak number of pending runs (stack-based sorters only)
    merge_tree        recorded merge tree when SortConfig.record_tree is set
    """

    merge_cost: int = 0
    comparisons: int = 0
    runs_detected: int = 0
    max_stack_height: int = 0
    merge_tree: Optional[object] = None


@dataclass(frozen=True)
class Run:
    """Inclusive index range [start, end]; descending means it was reversed."""

    start: int
    end: int
    descending: bool = False

    def __len__(self) -> int:
        return self.end - self.start + 1


def reverse_range(a: np.ndarray, i: int, j: int, tags: Optional[np.ndarray] = None) -> None:
    """Reverse a[i..j] in place (j inclusive)."""
    a[i : j + 1] = a[i : j + 1][::-1]
    if tags is not None:
        tags[i : j + 1] = tags[i : j + 1][::-1]


def _scan_ascending(a: np.ndarray, i: int, hi: int) -> int:
    """Largest j <= hi with a[i..j] weakly increasing (block-doubling scan)."""
    j = i
    block = 32
    while j < hi:
        k = min(hi, j + block)
        seg = a[j : k + 1]
        bad = np.nonzero(seg[:-1] > seg[1:])[0]
        if bad.size:
            return j + int(bad[0])
        j = k
        block = min(block * 4, 1 << 16)
    return hi


def _scan_descending(a: np.ndarray, i: int, hi: int) -> int:
    """Largest j <= hi with a[i..j] strictly decreasing."""
    j = i
    block = 32
    while j < hi:
        k = min(hi, j + block)
        seg = a[j : k + 1]
        bad = np.nonzero(seg[:-1] <= seg[1:])[0]
        if bad.size:
            return j + int(bad[0])
        j = k
        block = min(block * 4, 1 << 16)
    return hi


def _scan_ascending_left(a: np.ndarray, i: int, lo: int) -> int:
    """Smallest k >= lo with a[k..i] weakly increasing."""
    k = i
    block = 32
    while k > lo:
        s = max(lo, k - block)
        seg = a[s : k + 1]
        bad = np.nonzero(seg[:-1] > seg[1:])[0]
        if bad.size:
            return s + int(bad[-1]) + 1
        k = s
        block = min(block * 4, 1 << 16)
    return lo


def _scan_descending_left(a: np.ndarray, i: int, lo: int) -> int:
    """Smallest k >= lo with a[k..i] strictly decreasing."""
    k = i
    block = 32
    while k > lo:
        s = max(lo, k - block)
        seg = a[s : k + 1]
        bad = np.nonzero(seg[:-1] <= seg[1:])[0]
        if bad.size:
            return s + int(bad[-1]) + 1
        k = s
        block = min(block * 4, 1 << 16)
    return lo


def find_run_right(
    a: np.ndarray,
    i: int,
    hi: int,
    metrics: Metrics,
    tags: Optional[np.ndarray] = None,
) -> Run:
    """Maximal run starting at i, ending at or before hi.

    A strictly decreasing run is reversed in place before returning.  The
    comparison count equals that of the sequential scan: one comparison per
    adjacent pair examined, including the failing pair (if any).
    """
    if i == hi:
        return Run(i, i, False)
    if a[i] <= a[i + 1]:
        j = _scan_ascending(a, i, hi)
        metrics.comparisons += (j - i + 1) if j < hi else (j - i)
        return Run(i, j, False)
    j = _scan_descending(a, i, hi)
    metrics.comparisons += (j - i + 1) if j < hi else (j - i)
    reverse_range(a, i, j, tags)
    return Run(i, j, True)


def extend_run_around(
    a: np.ndarray,
    m: int,
    lo: int,
    hi: int,
    metrics: Metrics,
    tags: Optional[np.ndarray] = None,
) -> Run:
    """Maximal run containing position m within [lo, hi].

    Probing order favors the weakly increasing interpretation: if a[m] starts
    or extends an increasing segment (a[m] <= a[m+1], or a[m-1] <= a[m]), the
    increasing run around/ending at m is returned; only when m sits strictly
    inside a descending pair chain is the strictly decreasing run taken (and
    reversed).  This keeps the detected segment consistent with a left-to-right
    scan whenever the neighborhood decides it locally.
    """
    if lo == hi:
        return Run(lo, lo, False)
    if m < hi:
        metrics.comparisons += 1
        ascending_right = bool(a[m] <= a[m + 1])
    else:
        ascending_right = False
    if ascending_right:
        j = _scan_ascending(a, m + 1, hi)
        metrics.comparisons += (j - m - 1 + 1) if j < hi else (j - m - 1)
        i = _scan_ascending_left(a, m, lo)
        metrics.comparisons += (m - i + 1) if i > lo else (m - i)
        return Run(i, j, False)
    if m > lo:
        metrics.comparisons += 1
        if a[m - 1] <= a[m]:
            # m ends a weakly increasing run
            i = _scan_ascending_left(a, m - 1, lo)
            metrics.comparisons += (m - 1 - i + 1) if i > lo else (m - 1 - i)
            return Run(i, m, False)
        # strictly decreasing chain through m
        i = _scan_descending_left(a, m - 1, lo)
        metrics.comparisons += (m - 1 - i + 1) if i > lo else (m - 1 - i)
    else:
        i = m
    if m < hi:
        j = _scan_descending(a, m + 1, hi)
        metrics.comparisons += (j - m - 1 + 1) if j < hi else (j - m - 1)
    else:
        j = m
    if i == j:
        return Run(i, j, False)
    reverse_range(a, i, j, tags)
    return Run(i, j, True)


def insertionsort_presorted(
    a: np.ndarray,
    lo: int,
    hi: int,
    n_presorted: int,
    metrics: Metrics,
    tags: Optional[np.ndarray] = None,
) -> None:
    """Stable straight insertion sort of a[lo..hi] with a sorted prefix.

    The first ``n_presorted`` elements are known weakly increasing and are
    not touched.  Comparison count matches the sequential-search insertion
    loop: inserting v after g greater elements costs g+1 comparisons, or g
    when v is smaller than the whole prefix (the scan runs off the left end).
    """
    length = hi - lo + 1
    npre = max(1, n_presorted)
    if length <= 1 or npre >= length:
        return
    chunk = a[lo : hi + 1]
    idx = np.arange(length)
    if length <= 2048:
        greater = (chunk[:, None] > chunk[None, :]) & (idx[:, None] < idx[None, :])
        g = greater.sum(axis=0)
    else:
        g = np.empty(length, dtype=np.int64)
        for t in range(length):
            g[t] = int(np.count_nonzero(chunk[:t] > chunk[t]))
    costs = g + (g < idx)
    metrics.comparisons += int(costs[npre:].sum())
    order = np.argsort(chunk, kind="stable")
    a[lo : hi + 1] = chunk[order]
    if tags is not None:
        tags[lo : hi + 1] = tags[lo : hi + 1][order]


def _stable_merge(
    a: np.ndarray,
    l: int,
    m: int,
    r: int,
    buf: np.ndarray,
    tags: Optional[np.ndarray],
    tag_buf: Optional[np.ndarray],
) -> None:
    """Stable in-place merge of a[l..m-1] and a[m..r] via the absolute buffer.

    Ties are resolved toward the left run; equal keys within either run keep
    their order, so the merge is stable in the strong sense.
    """
    nl = m - l
    nr = r - m + 1
    buf[l : r + 1] = a[l : r + 1]
    left = buf[l:m]
    right = buf[m : r + 1]
    # output slot of right[t]: (# left elements <= right[t]) + t
    idx_r = np.searchsorted(left, right, side="right") + np.arange(nr)
    # output slot of left[u]: (# right elements < left[u]) + u
    idx_l = np.searchsorted(right, left, side="left") + np.arange(nl)
    a[l + idx_l] = left
    a[l + idx_r] = right
    if tags is not None:
        tag_buf[l : r + 1] = tags[l : r + 1]
        tags[l + idx_l] = tag_buf[l:m]
        tags[l + idx_r] = tag_buf[m : r + 1]


def merge_runs_bitonic(
    a: np.ndarray,
    l: int,
    m: int,
    r: int,
    buf: np.ndarray,
    metrics: Metrics,
    tags: Optional[np.ndarray] = None,
    tag_buf: Optional[np.ndarray] = None,
) -> None:
    """Merge a[l..m-1] and a[m..r]; exactly one comparison per output element.

    Models the branch-light merge that stages the right run reversed and picks
    from both ends of the buffer, spending r-l+1 comparisons regardless of the
    interleaving.
    """
    _stable_merge(a, l, m, r, buf, tags, tag_buf)
    size = r - l + 1
    metrics.merge_cost += size
    metrics.comparisons += size


def merge_runs_classic(
    a: np.ndarray,
    l: int,
    m: int,
    r: int,
    buf: np.ndarray,
    metrics: Metrics,
    tags: Optional[np.ndarray] = None,
    tag_buf: Optional[np.ndarray] = None,
) -> None:
    """Two-pointer merge of a[l..m-1] and a[m..r] with remainder copy.

    Comparison count equals the scalar two-pointer loop: one comparison per
    output element until one run is exhausted, never more than r-l.
    """
    left = a[l:m]
    right = a[m : r + 1]
    # slot of the last left element / last right element in the merged output
    pos_left = (m - 1 - l) + int(np.searchsorted(right, left[-1], side="left"))
    pos_right = (r - m) + int(np.searchsorted(left, right[-1], side="right"))
    metrics.comparisons += min(pos_left, pos_right) + 1
    _stable_merge(a, l, m, r, buf, tags, tag_buf)
    metrics.merge_cost += r - l + 1
