"""Dipole Kakeya constructions and discretized covering checks."""

from ._core import (
    DipoleError,
    annuli_cover_oracle,
    box_dimension_fit,
    construction_a,
    construction_b,
    coverage_gap,
    covering_count,
    hausdorff_content_upper_bound_log2,
    lower_bound_exponent,
    partition_arc,
    run_suite,
    transfer_arcs,
)

__all__ = [
    "DipoleError",
    "annuli_cover_oracle",
    "box_dimension_fit",
    "construction_a",
    "construction_b",
    "coverage_gap",
    "covering_count",
    "hausdorff_content_upper_bound_log2",
    "lower_bound_exponent",
    "partition_arc",
    "run_suite",
    "transfer_arcs",
]
