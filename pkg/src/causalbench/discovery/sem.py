"""Synthetic linear SEM generator: random DAGs with known weights and data.

Doubles as the verification oracle for the discovery algorithms and as the
source of benchmark-kind datasets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from causalbench.graphs import MixedGraph, WeightedGraph
from causalbench.ingest import ColumnSpec, Dataset, DatasetMeta


@dataclass(frozen=True)
class SemSpec:
    node_count: int
    edge_probability: float | None = None
    edge_count: int | None = None
    weight_range: tuple[float, float] = (0.5, 1.5)
    noise_kind: str = "gaussian"
    sample_count: int = 1000
    seed: int = 42

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("node_count must be positive")
        if (self.edge_probability is None) == (self.edge_count is None):
            raise ValueError("specify exactly one of edge_probability / edge_count")
        max_edges = self.node_count * (self.node_count - 1) // 2
        if self.edge_count is not None and not 0 <= self.edge_count <= max_edges:
            raise ValueError(f"edge_count must be in [0, {max_edges}]")
        if self.edge_probability is not None and not 0 <= self.edge_probability <= 1:
            raise ValueError("edge_probability must be in [0, 1]")
        lo, hi = self.weight_range
        if not 0 <= lo <= hi:
            raise ValueError("weight_range magnitudes must satisfy 0 <= low <= high")
        if self.noise_kind not in ("gaussian", "uniform"):
            raise ValueError(f"unknown noise kind {self.noise_kind!r}")
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")


@dataclass(frozen=True)
class SemSample:
    dataset: Dataset
    true_dag: MixedGraph
    weights: WeightedGraph


def generate_sem(spec: SemSpec) -> SemSample:
    """Sample a random DAG, edge weights, and data.

    The DAG comes from a random topological order with edges drawn over the
    ordered pairs. Weight magnitudes are uniform in the given range with
    random sign; noise is unit-variance (standard normal, or uniform on
    [-sqrt(3), sqrt(3)]). Identical seeds give bit-identical output.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.node_count
    order = rng.permutation(n)
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if spec.edge_count is not None:
        chosen = (
            [slots[k] for k in sorted(rng.choice(len(slots), size=spec.edge_count, replace=False))]
            if slots
            else []
        )
    else:
        chosen = [slot for slot in slots if rng.random() < spec.edge_probability]

    lo, hi = spec.weight_range
    w = np.zeros((n, n))  # w[i, j] = coefficient on edge i -> j
    for a, b in chosen:
        i, j = int(order[a]), int(order[b])
        w[i, j] = rng.uniform(lo, hi) * (1 if rng.random() < 0.5 else -1)

    x = np.zeros((spec.sample_count, n))
    if spec.noise_kind == "gaussian":
        noise = rng.standard_normal((spec.sample_count, n))
    else:
        half_width = np.sqrt(3.0)
        noise = rng.uniform(-half_width, half_width, size=(spec.sample_count, n))
    for pos in range(n):
        j = int(order[pos])
        x[:, j] = x @ w[:, j] + noise[:, j]

    names = [f"x{i}" for i in range(n)]
    meta = DatasetMeta(name=f"sem-{spec.seed}", kind="benchmark", problem="none")
    dataset = Dataset(
        meta=meta,
        columns=tuple(ColumnSpec(name, "numeric") for name in names),
        matrix=x,
    )
    weights = WeightedGraph.from_weights(names, w)
    return SemSample(dataset=dataset, true_dag=weights.graph, weights=weights)
