"""Radicals of consecutive integers: factorization, sieves, matching pairs,
Pell and Stormer searches."""

from ._radseq import (
    VALUE_CAP,
    consecutive_with_support,
    count_smooth_radicals,
    equal_run_pairs,
    factorize,
    fundamental_solution,
    is_prime,
    min_adjacent_radical,
    product_ratio_check,
    quality,
    quality_scan,
    radical,
    radical_support,
    run_length,
    smooth_count_estimate,
    smooth_count_report,
    solutions_up_to,
    squarefree_divisors,
    support_subset,
    verify_family,
    verify_pair,
    window_exponent_constant,
    window_matches,
    window_support,
)

__all__ = [
    "VALUE_CAP",
    "consecutive_with_support",
    "count_smooth_radicals",
    "equal_run_pairs",
    "factorize",
    "fundamental_solution",
    "is_prime",
    "min_adjacent_radical",
    "product_ratio_check",
    "quality",
    "quality_scan",
    "radical",
    "radical_support",
    "run_length",
    "smooth_count_estimate",
    "smooth_count_report",
    "solutions_up_to",
    "squarefree_divisors",
    "support_subset",
    "verify_family",
    "verify_pair",
    "window_exponent_constant",
    "window_matches",
    "window_support",
]
