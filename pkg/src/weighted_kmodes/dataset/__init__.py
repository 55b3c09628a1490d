"""
Dataset module: loading, integer encoding and global value statistics.
"""

from .frequencies import GlobalFrequencyTable, global_frequencies, msavs
from .synthetic import NURSERY_CARDINALITIES, grouped_dataset, planted_dataset, random_dataset
from .table import (
    AttributeSchema,
    EncodedDataset,
    LabeledDataset,
    TableFormat,
    load_table,
    load_table_path,
)

__all__ = [
    "AttributeSchema",
    "EncodedDataset",
    "LabeledDataset",
    "TableFormat",
    "load_table",
    "load_table_path",
    "GlobalFrequencyTable",
    "global_frequencies",
    "msavs",
    "NURSERY_CARDINALITIES",
    "grouped_dataset",
    "planted_dataset",
    "random_dataset",
]
