import numpy as np
import pytest
from sklearn.base import clone

from conftest import DAMPING, PREFERRED
from mumorank import (
    MultimodalHypergraph,
    RankVector,
    WalkConfig,
    WalkSimulator,
    build_preference_vector,
    compare,
    mumorank,
    simulate,
)


@pytest.fixture
def tagging_s(tagging_graph):
    return build_preference_vector(tagging_graph, PREFERRED)


def run(graph, s, steps=200_000, **kw):
    return simulate(graph, DAMPING, s, WalkConfig(total_steps=steps, **kw))


def test_same_seed_same_counts(tagging_graph, tagging_s):
    a = run(tagging_graph, tagging_s, master_seed=7)
    b = run(tagging_graph, tagging_s, master_seed=7)
    for x, y in zip(a.counts, b.counts):
        assert x.tobytes() == y.tobytes()
    c = run(tagging_graph, tagging_s, master_seed=8)
    assert any(not np.array_equal(x, y) for x, y in zip(a.counts, c.counts))


def test_scheduling_does_not_change_counts(tagging_graph, tagging_s):
    config = WalkConfig(total_steps=100_003, master_seed=3, walkers=13)
    serial = simulate(tagging_graph, DAMPING, tagging_s, config)
    threaded = simulate(tagging_graph, DAMPING, tagging_s, config, n_jobs=4)
    rechunked = simulate(
        tagging_graph, DAMPING, tagging_s,
        WalkConfig(total_steps=100_003, master_seed=3, walkers=13, chunk=97),
    )
    for a, b, c in zip(serial.counts, threaded.counts, rechunked.counts):
        assert a.tobytes() == b.tobytes() == c.tobytes()


def test_sample_accounting(tagging_graph, tagging_s):
    config = WalkConfig(total_steps=10_000, burn_in=1_000, walkers=7)
    result = simulate(tagging_graph, DAMPING, tagging_s, config)
    assert result.n_samples == 9_000 == config.sampled_steps
    assert WalkConfig(total_steps=10_000).effective_burn_in == 1_000
    np.testing.assert_allclose(result.ranks.modality_sums(), 1.0, atol=1e-12)
    assert result.ranks[("tags", "pretty")] == 0.0


def test_single_hyperedge_walk():
    graph = MultimodalHypergraph(("a", "b", "c"), [("x", "y", "z")])
    result = simulate(graph, 0.5, build_preference_vector(graph), WalkConfig(total_steps=3000, walkers=3))
    assert [r.tolist() for r in result.ranks.node_ranks] == [[1.0], [1.0], [1.0]]


def test_undamped_walk_matches_degree_shares(tagging_graph, tagging_s):
    result = simulate(tagging_graph, 0.0, tagging_s, WalkConfig(total_steps=1_000_000, master_seed=1))
    for i in range(3):
        expected = tagging_graph.degrees(i) / 24
        assert np.max(np.abs(result.ranks.node_ranks[i] - expected)) < 0.01


def test_walk_tracks_solver(tagging_graph, tagging_s):
    analytic = mumorank(tagging_graph, DAMPING, tagging_s)
    result = run(tagging_graph, tagging_s, steps=2_000_000, master_seed=11)
    metrics = compare(result.ranks, analytic)
    assert metrics["max_abs_deviation"] < 0.01
    assert set(metrics["l1_per_modality"]) == set(tagging_graph.modalities)


def test_preference_start(tagging_graph, tagging_s):
    result = run(tagging_graph, tagging_s, steps=50_000, init="preference")
    assert result.n_samples == 45_000


def test_compare_cases():
    labels = (("a", "b"), ("c",))
    base = RankVector(("m", "n"), labels, (np.array([0.25, 0.75]), np.array([1.0])))
    assert compare(base, base)["max_abs_deviation"] == 0.0
    moved = RankVector(("m", "n"), labels, (np.array([0.25 + 1e-3, 0.75 - 1e-3]), np.array([1.0])))
    metrics = compare(moved, base)
    assert metrics["max_abs_deviation"] == pytest.approx(1e-3, abs=1e-15)
    assert metrics["l1_per_modality"]["m"] == pytest.approx(2e-3, abs=1e-15)
    other = RankVector(("m", "n"), (("a", "z"), ("c",)), base.node_ranks)
    with pytest.raises(ValueError):
        compare(other, base)


@pytest.mark.parametrize("kwargs", [
    {"total_steps": 0},
    {"total_steps": 10, "walkers": 0},
    {"total_steps": 10, "burn_in": 10},
    {"total_steps": 10, "master_seed": -1},
    {"total_steps": 10, "init": "random"},
])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        WalkConfig(**kwargs)


def test_estimator(tagging_graph):
    est = WalkSimulator(damping=DAMPING, preferred=PREFERRED, total_steps=20_000, seed=5)
    assert clone(est).get_params() == est.get_params()
    est.fit(tagging_graph)
    again = clone(est).fit(tagging_graph)
    for a, b in zip(est.counts_, again.counts_):
        assert a.tobytes() == b.tobytes()
