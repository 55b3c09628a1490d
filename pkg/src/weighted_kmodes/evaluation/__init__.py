"""Evaluation package exports."""

from .accuracy import AccuracyReport, clustering_accuracy, contingency_matrix, matched_accuracy

__all__ = [
    "AccuracyReport",
    "clustering_accuracy",
    "contingency_matrix",
    "matched_accuracy",
]
