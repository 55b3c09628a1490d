"""
Weights module: attribute value weighting under the five schemas.
"""

from .functions import StaticWeightTable, build_static_weights, weight, weight_matrix
from .schema import ALL_SCHEMAS, WeightingSchema
from .snapshot import ClusterFrequencySnapshot

__all__ = [
    "ALL_SCHEMAS",
    "WeightingSchema",
    "ClusterFrequencySnapshot",
    "StaticWeightTable",
    "build_static_weights",
    "weight",
    "weight_matrix",
]
