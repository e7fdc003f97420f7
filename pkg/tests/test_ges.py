import logging

import numpy as np
import pytest
from conftest import all_dags

from causalbench.discovery import (
    GesError,
    GesParams,
    SemSpec,
    bic_from_rss,
    bic_local,
    generate_sem,
    run_ges,
)
from causalbench.graphs import MixedGraph, cpdag_of
from causalbench.ingest import ColumnSpec, Dataset, DatasetMeta


def dataset_from_matrix(x):
    cols = tuple(ColumnSpec(f"x{i}", "numeric") for i in range(x.shape[1]))
    return Dataset(meta=DatasetMeta("fixture"), columns=cols, matrix=x)


def exhaustive_best_cpdag(dataset, penalty_discount=1.0):
    """Independent oracle: score every DAG on the dataset's nodes, take the max."""
    n = len(dataset.columns)
    cache = {}

    def local(j, parents):
        key = (j, frozenset(parents))
        if key not in cache:
            cache[key] = bic_local(dataset, j, parents, penalty_discount)
        return cache[key]

    best_score, best = -np.inf, None
    for g in all_dags(n):
        total = sum(local(j, [g.index(p) for p in g.parents(j)]) for j in range(n))
        if total > best_score:
            best_score, best = total, g
    return cpdag_of(best), best_score


class TestBicScore:
    def test_hand_fixture(self):
        # -50 * ln(0.25) - 1.5 * ln(100) = 69.3147 - 6.9078
        assert bic_from_rss(25.0, 100, 2, 1.0) == pytest.approx(62.4069, abs=1e-4)

    def test_no_parents_reduces_to_variance(self, rng):
        x = rng.normal(size=(200, 1))
        ds = dataset_from_matrix(x)
        var_ml = x[:, 0].var()
        expected = -(200 / 2) * np.log(var_ml) - 0.5 * np.log(200)
        assert bic_local(ds, 0, []) == pytest.approx(expected, rel=1e-12)

    def test_exact_fit_floor_is_finite(self, rng):
        x = rng.normal(size=(100, 2))
        x[:, 1] = 3.0 * x[:, 0]
        score = bic_local(dataset_from_matrix(x), 1, [0])
        assert np.isfinite(score)

    def test_singular_design_ridge_fallback(self, rng, caplog):
        x = rng.normal(size=(100, 3))
        x[:, 1] = x[:, 0]  # duplicated regressor
        with caplog.at_level(logging.WARNING):
            score = bic_local(dataset_from_matrix(x), 2, [0, 1])
        assert np.isfinite(score)
        assert "ridge" in caplog.text

    def test_parent_set_too_large(self, rng):
        x = rng.normal(size=(4, 4))
        with pytest.raises(GesError):
            bic_local(dataset_from_matrix(x), 0, [1, 2, 3])

    def test_penalty_monotone_in_parents(self, rng):
        x = rng.normal(size=(500, 3))
        ds = dataset_from_matrix(x)
        # independent data: adding parents should not pay off
        assert bic_local(ds, 0, []) > bic_local(ds, 0, [1, 2])


class TestGesParams:
    def test_validation(self):
        with pytest.raises(GesError):
            GesParams(penalty_discount=0)
        with pytest.raises(GesError):
            GesParams(max_parents=0)


class TestRunGes:
    def test_independent_columns_empty(self):
        rng = np.random.default_rng(8)
        res = run_ges(dataset_from_matrix(rng.normal(size=(2000, 4))))
        assert res.graph.edge_count() == 0

    def test_collider_recovered_exactly(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=(5000, 3))
        x[:, 2] = x[:, 0] + x[:, 1] + rng.normal(size=5000)
        res = run_ges(dataset_from_matrix(x))
        expected = MixedGraph(["x0", "x1", "x2"], directed=[("x0", "x2"), ("x1", "x2")])
        assert res.graph == expected

    def test_chain_cpdag(self):
        rng = np.random.default_rng(10)
        x = rng.normal(size=(5000, 3))
        x[:, 1] = x[:, 0] + rng.normal(size=5000)
        x[:, 2] = x[:, 1] + rng.normal(size=5000)
        res = run_ges(dataset_from_matrix(x))
        assert res.graph.has_undirected("x0", "x1") and res.graph.has_undirected("x1", "x2")

    def test_trace_deltas_positive_and_sum_to_score(self):
        sample = generate_sem(SemSpec(node_count=5, edge_probability=0.4, sample_count=2000, seed=7))
        res = run_ges(sample.dataset)
        assert all(op.delta > 0 for op in res.trace)
        base = sum(bic_local(sample.dataset, j, []) for j in range(5))
        assert res.total_score == pytest.approx(base + sum(op.delta for op in res.trace), abs=1e-6)

    def test_deterministic(self):
        sample = generate_sem(SemSpec(node_count=5, edge_probability=0.5, sample_count=1500, seed=3))
        a, b = run_ges(sample.dataset), run_ges(sample.dataset)
        assert a.graph == b.graph and a.total_score == b.total_score and a.trace == b.trace

    def test_max_parents_filter(self):
        rng = np.random.default_rng(12)
        x = rng.normal(size=(3000, 5))
        x[:, 4] = x[:, :4].sum(axis=1) + 0.5 * rng.normal(size=3000)
        res = run_ges(dataset_from_matrix(x), GesParams(max_parents=2))
        dag_parents = max(len(res.graph.parents(n)) + len(res.graph.neighbors(n)) for n in res.graph.nodes)
        assert dag_parents <= 2

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_exhaustive_best_bic(self, seed):
        sample = generate_sem(SemSpec(node_count=4, edge_probability=0.5, sample_count=2000, seed=100 + seed))
        res = run_ges(sample.dataset)
        oracle_cpdag, oracle_score = exhaustive_best_cpdag(sample.dataset)
        assert res.graph == oracle_cpdag or res.total_score == pytest.approx(oracle_score, abs=1e-9)
