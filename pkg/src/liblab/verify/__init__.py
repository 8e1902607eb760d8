"""Exact and brute-force checks of the identities and estimates behind liberation."""

from .bounds import (
    fibonacci_whittle_ratio,
    theorem_fake_sweep,
    verify_distinct_summation,
    verify_fibonacci_whittle,
    verify_sum_product,
    verify_theorem_fake,
    verify_yin_analogue,
    whittle_second_moment,
    yin_sweep,
)
from .group import (
    brute_force_group_expectation,
    contract_table,
    verify_less_jarring_recursion,
    verify_twist_identity,
)
from .report import TraceZeroMatrixSet, VerificationReport, random_trace_zero

__all__ = [
    "TraceZeroMatrixSet",
    "VerificationReport",
    "brute_force_group_expectation",
    "contract_table",
    "fibonacci_whittle_ratio",
    "random_trace_zero",
    "theorem_fake_sweep",
    "verify_distinct_summation",
    "verify_fibonacci_whittle",
    "verify_less_jarring_recursion",
    "verify_sum_product",
    "verify_theorem_fake",
    "verify_twist_identity",
    "verify_yin_analogue",
    "whittle_second_moment",
    "yin_sweep",
]
