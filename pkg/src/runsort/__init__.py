"""Run-adaptive stable mergesorts with provably near-minimal merge cost.

The package provides peeksort and powersort (natural mergesorts whose merge
order matches nearly-optimal alphabetic trees), elementary and stack-based
baseline sorters, the tree constructions themselves, seeded input
generators, and the ``sortbench`` benchmark CLI.
"""

from .runcore import Metrics, Run
from .sorters import (
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
from .opttree import (
    MergeLeaf,
    MergeNode,
    TreeCost,
    WeightVector,
    cartesian_tree_min,
    entropy,
    merge_cost_of_tree,
    method1_tree,
    method2_tree,
    method2prime_tree,
    node_powers,
    optimal_tree_cost,
    tree_cost,
)
from .gen import (
    RunProfile,
    from_run_lengths,
    load_array,
    random_permutation,
    random_runs,
    run_profile,
    save_array,
    timsort_drag,
    timsort_drag_lengths,
)

__all__ = [
    "Metrics", "Run", "SortConfig", "SORTERS",
    "peeksort", "powersort", "top_down_mergesort", "bottom_up_mergesort",
    "alpha_stack_sort", "alpha_merge_sort",
    "node_power_def", "node_power_bitwise",
    "WeightVector", "MergeLeaf", "MergeNode", "TreeCost",
    "entropy", "method1_tree", "method2_tree", "method2prime_tree",
    "node_powers", "cartesian_tree_min", "tree_cost", "optimal_tree_cost",
    "merge_cost_of_tree",
    "RunProfile", "random_permutation", "random_runs", "timsort_drag",
    "timsort_drag_lengths", "from_run_lengths", "run_profile",
    "save_array", "load_array",
]

__version__ = "0.1.0"
