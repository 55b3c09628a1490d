"""
Weighted k-modes - categorical data clustering with attribute value weighting.

Standard k-modes plus four weighted variants (df-, sf-, hcf- and hsf-k-modes),
clustering accuracy scoring and the paired-run and scalability experiments.
"""

__version__ = "0.1.0"
