"""
Engine module: the alternating-minimization clustering loop.
"""

from .engine import (
    Centers,
    Membership,
    RunConfig,
    RunResult,
    WeightingContext,
    assign_all,
    distance,
    distance_matrix,
    init_centers,
    objective,
    run,
    sample_center_indices,
    update_centers,
)

__all__ = [
    "Centers",
    "Membership",
    "RunConfig",
    "RunResult",
    "WeightingContext",
    "assign_all",
    "distance",
    "distance_matrix",
    "init_centers",
    "objective",
    "run",
    "sample_center_indices",
    "update_centers",
]
