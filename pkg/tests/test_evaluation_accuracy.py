import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.weighted_kmodes.errors import InputError
from src.weighted_kmodes.evaluation import (
    clustering_accuracy,
    contingency_matrix,
    matched_accuracy,
)


def test_pure_clusters_score_one():
    """Test every cluster holding a single class gives r = 1."""
    report = clustering_accuracy([0, 0, 1, 1, 2], [1, 1, 0, 0, 1], k=3, class_count=2)
    assert report.accuracy == 1.0
    assert report.dominant_classes == (1, 0, 1)
    assert report.dominant_counts == (2, 2, 1)


def test_hand_counted_fixture():
    """Test clusters {x,x,x,y} and {y,y,x} give (3 + 2) / 7."""
    x, y = 0, 1
    membership = [0, 0, 0, 0, 1, 1, 1]
    labels = [x, x, x, y, y, y, x]
    report = clustering_accuracy(membership, labels, k=2, class_count=2)
    assert report.accuracy == pytest.approx(5 / 7)
    assert report.dominant_counts == (3, 2)
    assert report.contingency.tolist() == [[3, 1], [1, 2]]
    assert report.n == 7


def test_single_cluster_baseline():
    """Test k = 1 scores the largest class share (Voting: 267/435)."""
    labels = [0] * 267 + [1] * 168
    report = clustering_accuracy([0] * 435, labels, k=1, class_count=2)
    assert report.accuracy == pytest.approx(267 / 435)


def test_empty_cluster_contributes_nothing():
    """Test an unused cluster index scores s = 0."""
    report = clustering_accuracy([0, 0, 2], [0, 1, 1], k=3, class_count=2)
    assert report.dominant_counts == (1, 0, 1)
    assert report.accuracy == pytest.approx(2 / 3)


def test_length_mismatch_is_input_error():
    """Test membership and labels must have equal length."""
    with pytest.raises(InputError):
        clustering_accuracy([0, 1], [0, 1, 1], k=2, class_count=2)


def test_empty_and_out_of_range_inputs():
    """Test empty partitions and ids outside their ranges are rejected."""
    with pytest.raises(InputError):
        clustering_accuracy([], [], k=1, class_count=1)
    with pytest.raises(InputError):
        contingency_matrix([0, 3], [0, 0], k=2, class_count=1)
    with pytest.raises(InputError):
        contingency_matrix([0, 1], [0, 2], k=2, class_count=2)


def test_relabeling_invariance():
    """Test r does not change when cluster indices or class ids are permuted."""
    rng = np.random.default_rng(99)
    for _ in range(100):
        k = int(rng.integers(1, 6))
        classes = int(rng.integers(1, 5))
        n = int(rng.integers(1, 60))
        membership = rng.integers(0, k, size=n)
        labels = rng.integers(0, classes, size=n)
        base = clustering_accuracy(membership, labels, k, classes).accuracy
        cluster_perm = rng.permutation(k)
        class_perm = rng.permutation(classes)
        assert clustering_accuracy(cluster_perm[membership], labels, k, classes).accuracy == pytest.approx(base)
        assert clustering_accuracy(membership, class_perm[labels], k, classes).accuracy == pytest.approx(base)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2)), min_size=1, max_size=50),
    st.integers(0, 3),
    st.integers(0, 3),
)
def test_merging_clusters_never_increases_accuracy(pairs, first, second):
    """Test row-max superadditivity: joining two clusters cannot raise r."""
    membership = np.array([c for c, _ in pairs])
    labels = np.array([y for _, y in pairs])
    before = clustering_accuracy(membership, labels, k=4, class_count=3).accuracy
    merged = np.where(membership == second, first, membership)
    after = clustering_accuracy(merged, labels, k=4, class_count=3).accuracy
    assert after <= before + 1e-12


def test_perfect_score_means_pure_clusters():
    """Test r = 1 exactly when every non-empty cluster is pure."""
    rng = np.random.default_rng(3)
    for _ in range(100):
        membership = rng.integers(0, 3, size=12)
        labels = rng.integers(0, 2, size=12)
        table = contingency_matrix(membership, labels, 3, 2)
        pure = all((row > 0).sum() <= 1 for row in table)
        assert (clustering_accuracy(membership, labels, 3, 2).accuracy == 1.0) == pure


def test_matched_accuracy_is_one_to_one():
    """Test the matched score cannot reuse a class for two clusters."""
    membership = [0, 0, 1, 1]
    labels = [0, 0, 0, 0]
    assert clustering_accuracy(membership, labels, 2, 1).accuracy == 1.0
    assert matched_accuracy(membership, labels, 2, 1) == 0.5
    assert matched_accuracy([1, 1, 0, 0], [0, 0, 1, 1], 2, 2) == 1.0


def test_report_to_dict():
    """Test the report serialises to plain Python types."""
    document = clustering_accuracy([0, 1], [1, 0], 2, 2).to_dict()
    assert document == {
        "accuracy": 1.0,
        "dominant_classes": [1, 0],
        "dominant_counts": [1, 1],
        "contingency": [[0, 1], [1, 0]],
    }
