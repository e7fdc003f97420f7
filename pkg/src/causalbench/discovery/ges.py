"""Greedy equivalence search over CPDAGs with a Gaussian BIC local score.

Two phases: forward inserts until no score gain, then backward deletes. Score
changes are local differences (the score is decomposable), and the state is
re-completed to a CPDAG after every applied operator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from causalbench.graphs import MixedGraph, PDag, consistent_extension, cpdag_of
from causalbench.ingest import Dataset

log = logging.getLogger(__name__)


class GesError(ValueError):
    code = "ges_error"


@dataclass(frozen=True)
class GesParams:
    penalty_discount: float = 1.0
    max_parents: int = 8

    def __post_init__(self):
        if self.penalty_discount <= 0:
            raise GesError("penalty_discount must be positive")
        if self.max_parents < 1:
            raise GesError("max_parents must be at least 1")


@dataclass(frozen=True)
class GesOp:
    kind: str  # "insert" or "delete"
    x: str
    y: str
    subset: tuple[str, ...]
    delta: float


@dataclass(frozen=True)
class GesResult:
    graph: MixedGraph
    total_score: float
    trace: tuple[GesOp, ...]


def bic_from_rss(rss: float, n: int, k: int, penalty_discount: float) -> float:
    """Gaussian BIC local score from a residual sum of squares.

    k is the parent count; the +1 in the dimension term covers the variance
    parameter. RSS is floored to keep the log finite on perfect fits.
    """
    rss = max(rss, 1e-12 * n)
    return -(n / 2.0) * np.log(rss / n) - penalty_discount * ((k + 1) / 2.0) * np.log(n)


def bic_local(dataset: Dataset, j: int, parents, penalty_discount: float = 1.0) -> float:
    """Score column j against a parent set: least-squares regression with
    intercept, then the BIC of the residuals."""
    parents = sorted(parents)
    x = dataset.matrix
    n = x.shape[0]
    if len(parents) >= n - 1:
        raise GesError(f"parent set of size {len(parents)} too large for {n} samples")
    y = x[:, j]
    design = np.column_stack([np.ones(n)] + [x[:, p] for p in parents])
    beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        log.warning("singular design for node %d with parents %s; ridge fallback", j, parents)
        gram = design.T @ design + 1e-8 * np.eye(design.shape[1])
        beta = np.linalg.solve(gram, design.T @ y)
    resid = y - design @ beta
    rss = float(resid @ resid)
    return bic_from_rss(rss, n, len(parents), penalty_discount)


class _ScoreCache:
    def __init__(self, dataset: Dataset, penalty_discount: float):
        self.dataset = dataset
        self.pd = penalty_discount
        self._cache: dict[tuple[int, frozenset], float] = {}

    def local(self, j: int, parents) -> float:
        key = (j, frozenset(parents))
        if key not in self._cache:
            self._cache[key] = bic_local(self.dataset, j, parents, self.pd)
        return self._cache[key]


# -- operator machinery ---------------------------------------------------------


def _na_yx(p: PDag, y: int, x: int) -> set[int]:
    """Undirected neighbors of y that are adjacent to x."""
    return {v for v in p.neighbors(y) if p.adjacent(v, x)}


def _is_clique(p: PDag, nodes) -> bool:
    return all(p.adjacent(a, b) for a, b in combinations(sorted(nodes), 2))


def _blocks_semi_directed(p: PDag, y: int, x: int, blocked: set[int]) -> bool:
    """True iff every semi-directed path y ~> x passes through `blocked`."""
    if y in blocked:
        return True
    seen = {y}
    stack = [y]
    while stack:
        u = stack.pop()
        if u == x:
            return False
        for v in range(p.n):
            if v in seen or v in blocked:
                continue
            if p.has_directed(u, v) or p.has_undirected(u, v):
                seen.add(v)
                stack.append(v)
    return True


def _apply_insert(p: PDag, x: int, y: int, t: set[int]) -> None:
    p.orient(x, y)
    for v in t:
        p.orient(v, y)


def _apply_delete(p: PDag, x: int, y: int, h: set[int]) -> None:
    p.remove(x, y)
    for v in h:
        p.orient(y, v)
        if p.has_undirected(x, v):
            p.orient(x, v)


def _recomplete(p: PDag, names) -> PDag:
    """PDAG -> CPDAG: take a consistent extension, then re-complete."""
    dag = consistent_extension(p.to_graph(names))
    return PDag.from_graph(cpdag_of(dag))


def _best_insert(p: PDag, cache: _ScoreCache, max_parents: int):
    best = None
    for x in range(p.n):
        for y in range(p.n):
            if x == y or p.adjacent(x, y):
                continue
            na = _na_yx(p, y, x)
            pa_y = set(p.parents(y))
            t0 = sorted(v for v in p.neighbors(y) if not p.adjacent(v, x))
            for size in range(len(t0) + 1):
                for t in combinations(t0, size):
                    t = set(t)
                    clique_set = na | t
                    if len(pa_y | clique_set) + 1 > max_parents:
                        continue
                    if not _is_clique(p, clique_set):
                        continue
                    if not _blocks_semi_directed(p, y, x, clique_set):
                        continue
                    base = pa_y | clique_set
                    delta = cache.local(y, base | {x}) - cache.local(y, base)
                    if (best is None and delta > 0) or (best is not None and delta > best[0]):
                        best = (delta, x, y, tuple(sorted(t)))
    return best


def _best_delete(p: PDag, cache: _ScoreCache):
    best = None
    for x in range(p.n):
        for y in range(p.n):
            if x == y:
                continue
            if not (p.has_directed(x, y) or p.has_undirected(x, y)):
                continue
            na = _na_yx(p, y, x)
            pa_y = set(p.parents(y))
            for size in range(len(na) + 1):
                for h in combinations(sorted(na), size):
                    h = set(h)
                    remaining = na - h
                    if not _is_clique(p, remaining):
                        continue
                    aux = remaining | pa_y
                    delta = cache.local(y, aux - {x}) - cache.local(y, aux | {x})
                    if (best is None and delta > 0) or (best is not None and delta > best[0]):
                        best = (delta, x, y, tuple(sorted(h)))
    return best


def run_ges(dataset: Dataset, params: GesParams = GesParams()) -> GesResult:
    """Forward-insert then backward-delete greedy search.

    Candidate operators are enumerated in lexicographic (x, y, subset) order
    and only a strictly better score change replaces the current best, so tie
    handling is deterministic.
    """
    names = dataset.column_names
    n = len(names)
    cache = _ScoreCache(dataset, params.penalty_discount)
    p = PDag(n)
    trace: list[GesOp] = []

    while True:
        best = _best_insert(p, cache, params.max_parents)
        if best is None:
            break
        delta, x, y, t = best
        _apply_insert(p, x, y, set(t))
        p = _recomplete(p, names)
        trace.append(GesOp("insert", names[x], names[y], tuple(names[v] for v in t), delta))

    while True:
        best = _best_delete(p, cache)
        if best is None:
            break
        delta, x, y, h = best
        _apply_delete(p, x, y, set(h))
        p = _recomplete(p, names)
        trace.append(GesOp("delete", names[x], names[y], tuple(names[v] for v in h), delta))

    graph = p.to_graph(names)
    dag = consistent_extension(graph)
    total = sum(cache.local(j, [dag.index(q) for q in dag.parents(j)]) for j in range(n))
    return GesResult(graph=graph, total_score=float(total), trace=tuple(trace))
