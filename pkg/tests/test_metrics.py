import math

import numpy as np
import pytest

from oracles import ari_bf, calinski_harabasz_bf, davies_bouldin_bf, silhouette_bf
from qcluster import metrics
from qcluster.errors import MetricUndefinedError, UsageError

FOUR = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
FOUR_LABELS = [0, 0, 1, 1]


def test_four_point_fixture_frozen_values():
    # frozen from tests/oracles.py; silhouette equals 1 - 2 / (10 + sqrt(101))
    assert metrics.silhouette(FOUR, FOUR_LABELS) == pytest.approx(0.9002487577582194, abs=1e-12)
    assert metrics.silhouette(FOUR, FOUR_LABELS) == pytest.approx(1 - 2 / (10 + math.sqrt(101)))
    assert metrics.davies_bouldin(FOUR, FOUR_LABELS) == pytest.approx(0.1, abs=1e-12)
    assert metrics.calinski_harabasz(FOUR, FOUR_LABELS) == pytest.approx(200.0, abs=1e-9)


def test_one_dimensional_calinski_harabasz():
    xs = [0.3, 1.1, 2.5, 0.9, 2.0, 1.7]
    assert metrics.calinski_harabasz(xs, [0, 0, 1, 0, 1, 1]) == pytest.approx(15.05940594059406)


def test_ari_values():
    assert metrics.adjusted_rand_index([0, 0, 0, 1, 1, 1], [0, 0, 1, 1, 2, 2]) == pytest.approx(8 / 33)
    assert metrics.adjusted_rand_index([0, 1, 1, 2], [0, 1, 1, 2]) == 1.0
    assert metrics.adjusted_rand_index([0, 1, 1, 2], [5, 3, 3, 9]) == 1.0
    with pytest.raises(UsageError):
        metrics.adjusted_rand_index([0, 1], [0])


@pytest.mark.parametrize("trial", range(50))
def test_metrics_match_brute_force(trial):
    rng = np.random.default_rng(trial)
    m = int(rng.integers(5, 31))
    k = int(rng.integers(2, 5))
    data = rng.normal(size=(m, int(rng.integers(1, 4)))) * rng.uniform(0.1, 10)
    labels = np.r_[np.arange(k), rng.integers(0, k, m - k)]
    rng.shuffle(labels)
    assert metrics.silhouette(data, labels) == pytest.approx(silhouette_bf(data, labels), abs=1e-9)
    assert metrics.davies_bouldin(data, labels) == pytest.approx(davies_bouldin_bf(data, labels), abs=1e-9)
    assert metrics.calinski_harabasz(data, labels) == pytest.approx(
        calinski_harabasz_bf(data, labels), rel=1e-9, abs=1e-9)
    other = rng.integers(0, 3, m)
    assert metrics.adjusted_rand_index(labels, other) == pytest.approx(ari_bf(list(labels), list(other)), abs=1e-12)


@pytest.mark.parametrize("trial", range(10))
def test_invariant_under_relabeling_and_permutation(trial):
    rng = np.random.default_rng(100 + trial)
    data = rng.normal(size=(20, 2))
    labels = np.r_[0, 1, 2, rng.integers(0, 3, 17)]
    base = metrics.metric_report(data, labels)
    relabeled = np.array([2, 0, 1])[labels]
    perm = rng.permutation(20)
    for d, lab in ((data, relabeled), (data[perm], labels[perm])):
        r = metrics.metric_report(d, lab)
        assert r.silhouette == pytest.approx(base.silhouette, abs=1e-12)
        assert r.davies_bouldin == pytest.approx(base.davies_bouldin, abs=1e-12)
        assert r.calinski_harabasz == pytest.approx(base.calinski_harabasz, rel=1e-12)
    assert -1 <= base.silhouette <= 1 and base.davies_bouldin >= 0 and base.calinski_harabasz >= 0
    assert (base.k, base.m) == (3, 20)


def test_better_separation_ordering():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(10, 2))
    b = rng.normal(size=(10, 2))
    labels = [0] * 10 + [1] * 10
    prev = None
    for shift in (3.0, 5.0, 8.0):
        r = metrics.metric_report(np.vstack([a, b + shift]), labels)
        if prev is not None:
            assert r.silhouette > prev.silhouette
            assert r.calinski_harabasz > prev.calinski_harabasz
            assert r.davies_bouldin < prev.davies_bouldin
        prev = r


def test_degenerate_conventions():
    # identical points, two forced clusters: a = b = 0 gives 0
    assert metrics.silhouette(np.zeros((4, 2)), [0, 0, 1, 1]) == 0.0
    # point masses: zero spread
    assert metrics.davies_bouldin([[0.0], [0.0], [1.0], [1.0]], [0, 0, 1, 1]) == 0.0
    # singleton clusters contribute 0 to the silhouette mean
    s = metrics.silhouette([[0.0], [0.1], [5.0]], [0, 0, 1])
    assert s == pytest.approx(silhouette_bf([[0.0], [0.1], [5.0]], [0, 0, 1]))
    with pytest.raises(MetricUndefinedError):
        metrics.silhouette(FOUR, [0, 0, 0, 0])
    with pytest.raises(MetricUndefinedError):
        metrics.davies_bouldin(np.zeros((4, 1)), [0, 0, 1, 1])
    with pytest.raises(MetricUndefinedError):
        metrics.calinski_harabasz(FOUR, [0, 1, 2, 3])
    with pytest.raises(MetricUndefinedError):
        metrics.calinski_harabasz([[0.0], [0.0], [1.0], [1.0]], [0, 0, 1, 1])
    with pytest.raises(UsageError):
        metrics.silhouette(FOUR, [0, 1])
