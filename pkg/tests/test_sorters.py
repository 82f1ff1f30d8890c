import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from runsort.gen import from_run_lengths, run_profile
from runsort.opttree import (
    WeightVector,
    cartesian_tree_min,
    entropy,
    internal_nodes_inorder,
    method1_tree,
    method2prime_tree,
    node_powers,
)
from runsort.runcore import Metrics
from runsort.sorters import (
    SORTERS,
    SortConfig,
    alpha_merge_sort,
    alpha_stack_sort,
    bottom_up_mergesort,
    node_power_bitwise,
    node_power_def,
    peeksort,
    powersort,
    top_down_mergesort,
)

FIG_LENGTHS = [5, 3, 3, 14, 1, 2]

PLAIN = SortConfig(min_run_len=1, merge_kind="classic")
TREE = SortConfig(min_run_len=1, merge_kind="classic", record_tree=True)


def sort_with(fn, a, cfg=PLAIN):
    a = np.asarray(a, dtype=np.int64).copy()
    m = fn(a, cfg)
    return a, m


def assert_sorted(a):
    assert np.all(a[:-1] <= a[1:])


# --- SortConfig -------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        SortConfig(min_run_len=0)
    with pytest.raises(ValueError):
        SortConfig(merge_kind="galloping")
    with pytest.raises(ValueError):
        SortConfig(alpha=1.0)


# --- peeksort ---------------------------------------------------------------

def test_peeksort_sorted_input():
    a, m = sort_with(peeksort, np.arange(1, 101))
    assert_sorted(a)
    assert m.merge_cost == 0
    assert m.comparisons == 99
    assert m.runs_detected == 1


def test_peeksort_reverse_sorted():
    a, m = sort_with(peeksort, np.arange(100, 0, -1))
    assert_sorted(a)
    assert m.merge_cost == 0
    assert m.comparisons == 99


def test_peeksort_six_run_example():
    a, m = sort_with(peeksort, from_run_lengths(FIG_LENGTHS), TREE)
    assert_sorted(a)
    assert m.merge_cost == 65
    assert m.merge_tree == method1_tree(WeightVector.from_lengths(FIG_LENGTHS))


def test_peeksort_empty_and_single():
    for n in (0, 1):
        a, m = sort_with(peeksort, np.arange(n))
        assert m.merge_cost == 0 and m.comparisons == 0


# --- powersort ---------------------------------------------------------------

def test_powersort_sorted_input():
    a, m = sort_with(powersort, np.arange(1, 101))
    assert m.merge_cost == 0
    assert m.runs_detected == 1


def test_powersort_two_half_runs():
    n = 64
    a = np.concatenate([np.arange(32, 64), np.arange(0, 32)])
    a, m = sort_with(powersort, a)
    assert_sorted(a)
    assert m.merge_cost == n
    assert m.runs_detected == 2


def test_powersort_six_run_example():
    a, m = sort_with(powersort, from_run_lengths(FIG_LENGTHS), TREE)
    assert_sorted(a)
    assert m.merge_cost == 67
    # powers of the merge nodes, in boundary order
    assert [nd.power for nd in internal_nodes_inorder(m.merge_tree)] == [3, 2, 1, 2, 4]
    assert m.max_stack_height <= math.floor(math.log2(28)) + 1


# --- node powers --------------------------------------------------------------

def test_node_power_def_examples():
    assert node_power_def(1, 5, 6, 8, 28) == 3
    assert node_power_def(9, 11, 12, 25, 28) == 1
    assert node_power_def(1, 1, 2, 2, 2) == 1


def test_node_power_bitwise_examples():
    assert node_power_bitwise(1, 5, 6, 8, 28) == 3
    assert node_power_bitwise(26, 26, 27, 28, 28) == 4


def test_node_power_validation():
    with pytest.raises(ValueError):
        node_power_def(0, 1, 2, 3, 4)
    with pytest.raises(ValueError):
        node_power_def(1, 3, 3, 4, 5)
    with pytest.raises(ValueError):
        node_power_bitwise(1, 1, 2, 2, 1 << 31)


def test_node_power_capacity():
    n = 28
    for s1 in range(1, n):
        for e1 in range(s1, n):
            assert node_power_def(s1, e1, e1 + 1, n, n) <= math.floor(math.log2(n)) + 1


@given(st.data())
def test_node_power_equivalence_random(data):
    n = data.draw(st.integers(2, 1 << 30))
    s1 = data.draw(st.integers(1, n - 1))
    e1 = data.draw(st.integers(s1, n - 1))
    s2 = data.draw(st.integers(e1 + 1, n))
    e2 = data.draw(st.integers(s2, n))
    assert node_power_def(s1, e1, s2, e2, n) == node_power_bitwise(s1, e1, s2, e2, n)


# --- elementary baselines ------------------------------------------------------

def test_top_down_sorted_skips_all_merges():
    a, m = sort_with(top_down_mergesort, np.arange(64))
    assert m.merge_cost == 0


def test_top_down_two_reversed():
    a, m = sort_with(top_down_mergesort, [2, 1])
    assert list(a) == [1, 2]
    assert m.merge_cost == 2


def test_top_down_random_cost_bound():
    rng = np.random.default_rng(11)
    for n in (10, 100, 777):
        a, m = sort_with(top_down_mergesort, rng.permutation(n))
        assert_sorted(a)
        assert m.merge_cost <= n * math.ceil(math.log2(n))


def test_bottom_up_mirrors():
    a, m = sort_with(bottom_up_mergesort, np.arange(64))
    assert m.merge_cost == 0
    a, m = sort_with(bottom_up_mergesort, [2, 1])
    assert list(a) == [1, 2] and m.merge_cost == 2
    rng = np.random.default_rng(12)
    n = 500
    a, m = sort_with(bottom_up_mergesort, rng.permutation(n))
    assert_sorted(a)
    # closed-form pass accounting: each pass costs at most n
    assert m.merge_cost <= n * math.ceil(math.log2(n))


# --- stack-based baselines ------------------------------------------------------

def test_alpha_stack_equal_runs_like_bottom_up_over_runs():
    L = 8
    a = from_run_lengths([L, L, L, L])
    a, m = sort_with(alpha_stack_sort, a)
    assert_sorted(a)
    assert m.merge_cost == 8 * L  # (L+L) + (L+L) + 4L


def test_alpha_stack_single_run():
    a, m = sort_with(alpha_stack_sort, np.arange(50))
    assert m.merge_cost == 0


def test_alpha_stack_one_short_one_long():
    n = 32
    a = from_run_lengths([1, n - 1])
    a, m = sort_with(alpha_stack_sort, a)
    assert_sorted(a)
    assert m.merge_cost == n


def test_alpha_merge_traces():
    a, m = sort_with(alpha_merge_sort, np.arange(50))
    assert m.merge_cost == 0
    n = 32
    a, m = sort_with(alpha_merge_sort, from_run_lengths([1, n - 1]))
    assert_sorted(a)
    assert m.merge_cost == n
    # pre-push rule: a long incoming run first collapses the stack,
    # unlike the plain alpha-stack rule on the same input
    a, m = sort_with(alpha_merge_sort, from_run_lengths([4, 2, 16]))
    assert_sorted(a)
    assert m.merge_cost == 6 + 22
    a, m = sort_with(alpha_stack_sort, from_run_lengths([4, 2, 16]))
    assert m.merge_cost == 18 + 22


# --- shared properties ------------------------------------------------------------

@st.composite
def arrays(draw):
    kind = draw(st.integers(0, 2))
    n = draw(st.integers(0, 400))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    if kind == 0:
        return rng.permutation(n).astype(np.int64)
    if kind == 1:
        return rng.integers(0, max(1, n // 4 + 1), size=n).astype(np.int64)
    lens = []
    left = n
    while left > 0:
        L = min(left, int(rng.integers(1, 20)))
        lens.append(L)
        left -= L
    return from_run_lengths(lens) if lens else np.empty(0, dtype=np.int64)


@given(arrays(), st.sampled_from(sorted(SORTERS)),
       st.sampled_from([1, 3, 24]), st.sampled_from(["bitonic", "classic"]))
@settings(max_examples=120, deadline=None)
def test_all_sorters_sort_stably(a, name, w, merge_kind):
    tags = np.arange(len(a), dtype=np.int64)
    order = np.argsort(a, kind="stable")
    work, twork = a.copy(), tags.copy()
    SORTERS[name](work, SortConfig(min_run_len=w, merge_kind=merge_kind), tags=twork)
    assert np.array_equal(work, a[order])
    assert np.array_equal(twork, tags[order])


@given(arrays(), st.sampled_from(sorted(SORTERS)))
@settings(max_examples=60, deadline=None)
def test_cutoff_does_not_change_function(a, name):
    w1, _ = sort_with(SORTERS[name], a, SortConfig(min_run_len=1))
    w24, _ = sort_with(SORTERS[name], a, SortConfig(min_run_len=24))
    assert np.array_equal(w1, w24)


def run_length_vectors():
    # interior runs of length >= 2 are exactly realizable; the last may be 1
    return st.lists(st.integers(2, 40), min_size=1, max_size=64).flatmap(
        lambda ls: st.booleans().map(lambda tail: ls + [1] if tail else ls))


@given(run_length_vectors())
@settings(max_examples=150, deadline=None)
def test_recorded_trees_match_alphabetic_constructions(lens):
    a = from_run_lengths(lens)
    assert list(run_profile(a)) == lens
    w = WeightVector.from_lengths(lens)

    _, mp = sort_with(peeksort, a, TREE)
    assert mp.merge_tree == method1_tree(w)

    _, mw = sort_with(powersort, a, TREE)
    assert mw.merge_tree == method2prime_tree(w)
    if len(lens) > 1:
        assert mw.merge_tree == cartesian_tree_min(node_powers(w))


@given(run_length_vectors())
@settings(max_examples=150, deadline=None)
def test_peek_power_theorem_bounds(lens):
    a = from_run_lengths(lens)
    n, r = sum(lens), len(lens)
    if n <= 2:
        return
    h = entropy(lens)
    tol = 1e-6 * n

    _, mp = sort_with(peeksort, a)
    assert mp.merge_cost <= h * n + 2 * n - (r + 2) + tol
    assert mp.comparisons <= h * n + 3 * n - (2 * r + 3) + tol

    _, mw = sort_with(powersort, a)
    assert mw.merge_cost <= h * n + 2 * n + tol
    assert mw.comparisons <= h * n + 3 * n - r + tol
    assert mw.max_stack_height <= math.floor(math.log2(n)) + 1
