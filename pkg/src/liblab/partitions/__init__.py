"""Exact combinatorics of set partitions, the chi/chichi classes and the Fibonacci distribution."""

from .chi import (
    ClumpClasses,
    chichi_indicator_table,
    chichi_table_check,
    clump,
    clump_classes,
    clump_equivalent,
    forbidden_doubletons,
    in_part_chi,
    in_part_chichi,
    part_chi,
    part_chichi,
    random_chichi_table,
)
from .fibonacci import (
    PHI_MINUS,
    PHI_PLUS,
    FibonacciVariate,
    fibonacci_moment,
    fibonacci_weight,
    fibonacci_weight_monte_carlo,
    fibonacci_weight_reduced,
    partition_weights,
    sample_fibonacci,
    sample_fibonacci_array,
)
from .lattice import (
    IndexTuple,
    SetPartition,
    all_partitions,
    bell_number,
    block_product,
    crude_bounds_check,
    distinct_sum_by_mobius,
    mobius_inversion_check,
    mobius_zero,
    partition_of_tuple,
    product_tensor,
    refinements,
    refines,
    sum_over_refined,
)

__all__ = [
    "PHI_MINUS",
    "PHI_PLUS",
    "ClumpClasses",
    "FibonacciVariate",
    "IndexTuple",
    "SetPartition",
    "all_partitions",
    "bell_number",
    "block_product",
    "chichi_indicator_table",
    "chichi_table_check",
    "clump",
    "clump_classes",
    "clump_equivalent",
    "crude_bounds_check",
    "distinct_sum_by_mobius",
    "fibonacci_moment",
    "fibonacci_weight",
    "fibonacci_weight_monte_carlo",
    "fibonacci_weight_reduced",
    "forbidden_doubletons",
    "in_part_chi",
    "in_part_chichi",
    "mobius_inversion_check",
    "mobius_zero",
    "part_chi",
    "part_chichi",
    "partition_of_tuple",
    "partition_weights",
    "product_tensor",
    "random_chichi_table",
    "refinements",
    "refines",
    "sample_fibonacci",
    "sample_fibonacci_array",
    "sum_over_refined",
]
