import pytest

from src.weighted_kmodes.bench import TimingRow, linear_fit, scalability_experiment, timing_frame
from src.weighted_kmodes.dataset import NURSERY_CARDINALITIES, planted_dataset
from src.weighted_kmodes.errors import ConfigError
from src.weighted_kmodes.weights import ALL_SCHEMAS, WeightingSchema

UNIT = WeightingSchema.UNIT
WF2 = WeightingSchema.WF2


@pytest.fixture(scope="module")
def nursery_like():
    return planted_dataset(n=600, seed=3)


def test_object_sweep_rows(nursery_like):
    """Test one row per (size point, schema) with prefix subsets."""
    rows = scalability_experiment(nursery_like, object_counts=[100, 200, 300], schemas=("kmodes", "sf"), k=3, repeats=2)
    assert len(rows) == 6
    assert [(r.value, r.schema) for r in rows[:2]] == [(100, UNIT), (100, WF2)]
    assert {r.axis for r in rows} == {"objects"}
    assert [r.n for r in rows if r.schema is UNIT] == [100, 200, 300]
    assert all(r.k == 3 and r.repeats == 2 for r in rows)
    assert all(r.mean_wall_time > 0.0 and r.mean_iterations >= 1.0 for r in rows)
    assert all(r.mean_preprocess_time <= r.mean_wall_time for r in rows)


def test_cluster_sweep_rows(nursery_like):
    """Test sweeping k keeps n fixed."""
    rows = scalability_experiment(nursery_like, cluster_counts=[2, 4, 6], schemas=("kmodes",), seed=1)
    assert [r.k for r in rows] == [2, 4, 6]
    assert {r.n for r in rows} == {600}
    assert {r.axis for r in rows} == {"clusters"}


def test_repeated_point_has_identical_iterations(nursery_like):
    """Test the same seed reproduces iteration counts."""
    first = scalability_experiment(nursery_like, object_counts=[400, 400], schemas=("hsf",), k=5, seed=8)
    second = scalability_experiment(nursery_like, object_counts=[400], schemas=("hsf",), k=5, seed=8)
    assert first[0].mean_iterations == first[1].mean_iterations == second[0].mean_iterations


def test_sweep_validation(nursery_like):
    """Test exactly one sweep axis and sizes within range."""
    with pytest.raises(ConfigError):
        scalability_experiment(nursery_like)
    with pytest.raises(ConfigError):
        scalability_experiment(nursery_like, object_counts=[100], cluster_counts=[2])
    with pytest.raises(ConfigError):
        scalability_experiment(nursery_like, object_counts=[700], k=3)
    with pytest.raises(ConfigError):
        scalability_experiment(nursery_like, cluster_counts=[0])
    with pytest.raises(ConfigError):
        scalability_experiment(nursery_like, object_counts=[100], repeats=0)


def test_timing_frame_columns(nursery_like):
    """Test timing columns are isolated under _seconds names."""
    rows = scalability_experiment(nursery_like, object_counts=[150, 300], schemas=("df",), k=4)
    frame = timing_frame(rows)
    assert frame["schema"].tolist() == ["df", "df"]
    assert {"mean_wall_seconds", "mean_preprocess_seconds", "mean_seconds_per_iteration"} <= set(frame.columns)
    assert "mean_wall_time" not in frame.columns


def _row(schema, value, seconds, iterations=2.0):
    return TimingRow(
        schema=schema, axis="objects", value=value, n=value, k=10, repeats=1,
        mean_wall_time=seconds, mean_preprocess_time=0.0, mean_iterations=iterations,
    )


def test_linear_fit_of_exact_line():
    """Test the least-squares fit recovers a straight line."""
    rows = [_row(UNIT, n, 0.5 + 0.001 * n) for n in (1000, 2000, 3000, 4000, 5000)]
    fit = linear_fit(rows, UNIT)
    assert fit.slope == pytest.approx(0.001)
    assert fit.intercept == pytest.approx(0.5)
    assert fit.r_squared == pytest.approx(1.0)
    per_iteration = linear_fit(rows, UNIT, per_iteration=True)
    assert per_iteration.slope == pytest.approx(0.0005)


def test_linear_fit_needs_two_points():
    """Test a single size point cannot be fitted."""
    with pytest.raises(ConfigError):
        linear_fit([_row(UNIT, 100, 1.0)], UNIT)
    with pytest.raises(ConfigError):
        linear_fit([_row(UNIT, 100, 1.0), _row(UNIT, 200, 2.0)], WF2)


@pytest.mark.slow
def test_nursery_scale_runtime_is_linear_in_n():
    """Test every schema's run time grows linearly in n and sf costs about as much as k-modes."""
    dataset = planted_dataset(n=12960, cardinalities=NURSERY_CARDINALITIES, class_count=5, seed=0)
    rows = scalability_experiment(
        dataset,
        object_counts=[2000, 4000, 6000, 8000, 10000, 12960],
        schemas=ALL_SCHEMAS,
        k=10,
        repeats=5,
        seed=0,
    )
    for schema in ALL_SCHEMAS:
        assert linear_fit(rows, schema).r_squared >= 0.9, schema.label
        assert linear_fit(rows, schema, per_iteration=True).r_squared >= 0.9, schema.label
    unit_time = sum(r.mean_wall_time for r in rows if r.schema is UNIT)
    sf_time = sum(r.mean_wall_time for r in rows if r.schema is WF2)
    assert sf_time <= 1.5 * unit_time
