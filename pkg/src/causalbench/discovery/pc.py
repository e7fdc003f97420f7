"""PC causal discovery: stable skeleton search, collider orientation, Meek closure."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from causalbench.discovery.ci import CiParams, fisher_z_test, partial_correlation
from causalbench.graphs import Mark, MixedGraph, PDag, _meek_pass
from causalbench.ingest import Dataset

log = logging.getLogger(__name__)

Sepsets = dict[tuple[str, str], frozenset]


@dataclass(frozen=True)
class PcResult:
    graph: MixedGraph
    sepsets: Sepsets
    ci_call_count: int


@dataclass
class _SkeletonState:
    pdag: PDag
    sepsets: dict[tuple[int, int], frozenset] = field(default_factory=dict)
    ci_calls: int = 0


def pc_skeleton(dataset: Dataset, params: CiParams = CiParams()) -> tuple[MixedGraph, Sepsets, int]:
    """Level-wise edge removal with adjacency sets frozen at each level start
    (the order-independent "stable" variant).

    Returns the undirected skeleton, the separating sets recorded for removed
    pairs, and the number of CI tests performed.
    """
    names = dataset.column_names
    n = len(names)
    data = dataset.matrix
    n_samples = dataset.sample_count
    corr = np.corrcoef(data, rowvar=False) if n > 1 else np.ones((1, 1))
    state = _SkeletonState(pdag=PDag.complete(n))

    level = 0
    while True:
        if n_samples - level - 3 <= 0:
            log.warning("stopping PC at level %d: too few samples to condition further", level)
            break
        frozen_adj = {i: state.pdag.adjacencies(i) for i in range(n)}
        for x in range(n):
            for y in range(n):
                if x == y or not state.pdag.adjacent(x, y):
                    continue
                candidates = [v for v in frozen_adj[x] if v != y]
                if len(candidates) < level:
                    continue
                removed = False
                for s in combinations(candidates, level):
                    r = partial_correlation(data, x, y, s, corr=corr)
                    verdict = fisher_z_test(r, n_samples, len(s), params.alpha)
                    state.ci_calls += 1
                    if verdict.independent:
                        state.pdag.remove(x, y)
                        state.sepsets[(min(x, y), max(x, y))] = frozenset(s)
                        removed = True
                        break
                if removed:
                    continue
        level += 1
        if not any(
            len(state.pdag.adjacencies(x)) - 1 >= level
            for x in range(n)
            if state.pdag.adjacencies(x)
        ):
            break

    skeleton = state.pdag.to_graph(names)
    sepsets = {
        (names[i], names[j]): frozenset(names[k] for k in s)
        for (i, j), s in state.sepsets.items()
    }
    return skeleton, sepsets, state.ci_calls


def orient_pc(skeleton: MixedGraph, sepsets: Sepsets) -> MixedGraph:
    """Collider orientation followed by Meek closure.

    Unshielded triples a - b - c become a -> b <- c when b is outside
    sepset(a, c). Triples are processed in node order; when a wanted
    orientation contradicts an existing directed mark, both go back to
    undirected, the pair is logged, and it stays untouched for the rest of
    the collider phase.
    """
    names = skeleton.nodes
    p = PDag.from_graph(skeleton)
    locked: set[tuple[int, int]] = set()

    def sepset(i: int, j: int):
        return sepsets.get((names[min(i, j)], names[max(i, j)]))

    triples = sorted(
        (a, b, c)
        for b in range(p.n)
        for a, c in combinations(sorted(p.adjacencies(b)), 2)
        if not p.adjacent(a, c)
    )
    for a, b, c in triples:
        s = sepset(a, c)
        if s is None or names[b] in s:
            continue
        for tail in (a, c):
            key = (min(tail, b), max(tail, b))
            if key in locked:
                continue
            if p.has_directed(b, tail):
                log.warning(
                    "conflicting collider orientations for pair (%s, %s); leaving undirected",
                    names[tail],
                    names[b],
                )
                p.set(tail, b, Mark.UNDIRECTED)
                locked.add(key)
            else:
                p.orient(tail, b)

    while _meek_pass(p):
        pass
    return p.to_graph(names)


def run_pc(dataset: Dataset, params: CiParams = CiParams()) -> PcResult:
    """Full PC: skeleton, then orientation. Deterministic given dataset and params."""
    skeleton, sepsets, calls = pc_skeleton(dataset, params)
    graph = orient_pc(skeleton, sepsets)
    return PcResult(graph=graph, sepsets=sepsets, ci_call_count=calls)
