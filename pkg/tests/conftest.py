import numpy as np
import pytest

from causalbench.graphs import Mark, MixedGraph


def random_dag(rng: np.random.Generator, n: int, edge_prob: float = 0.4) -> MixedGraph:
    """Random DAG: random node order, Bernoulli edges along that order."""
    order = rng.permutation(n)
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < edge_prob:
                edges.append((int(order[a]), int(order[b])))
    names = [f"x{i}" for i in range(n)]
    return MixedGraph(names, directed=edges)


def random_mixed_graph(rng: np.random.Generator, n: int, edge_prob: float = 0.4) -> MixedGraph:
    """Random mixed graph; directed part acyclic, some pairs undirected."""
    order = rng.permutation(n)
    directed, undirected = [], []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() >= edge_prob:
                continue
            if rng.random() < 0.3:
                undirected.append((int(order[a]), int(order[b])))
            else:
                directed.append((int(order[a]), int(order[b])))
    names = [f"x{i}" for i in range(n)]
    return MixedGraph(names, directed=directed, undirected=undirected)


def all_dags(n: int) -> list[MixedGraph]:
    """Every labeled DAG on n nodes (enumerate orientations of each pair)."""
    names = [f"x{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []

    def rec(k: int, edges: list):
        if k == len(pairs):
            g = MixedGraph(names, directed=edges)
            if _acyclic(g):
                out.append(g)
            return
        i, j = pairs[k]
        rec(k + 1, edges)
        rec(k + 1, edges + [(i, j)])
        rec(k + 1, edges + [(j, i)])

    rec(0, [])
    return out


def _acyclic(g: MixedGraph) -> bool:
    seen, done = set(), set()

    def visit(u) -> bool:
        seen.add(u)
        for v in g.children(u):
            if v in done:
                continue
            if v in seen or not visit(v):
                return False
        seen.discard(u)
        done.add(u)
        return True

    return all(visit(u) for u in g.nodes if u not in done)


def oracle_descendants(g: MixedGraph, node: str) -> set:
    out = {node}
    stack = [node]
    while stack:
        u = stack.pop()
        for v in g.children(u):
            if v not in out:
                out.add(v)
                stack.append(v)
    return out


def oracle_d_separated(g: MixedGraph, i: str, j: str, z: set) -> bool:
    """Brute-force oracle: enumerate every simple path and test blocking.

    A path is active given z iff every collider on it is in z or has a
    descendant in z, and no other interior node is in z.
    """
    z = set(z)

    def paths(a, b):
        stack = [(a, [a])]
        while stack:
            u, path = stack.pop()
            if u == b:
                yield path
                continue
            for v in g.adjacencies(u):
                if v not in path:
                    stack.append((v, path + [v]))

    for path in paths(i, j):
        active = True
        for k in range(1, len(path) - 1):
            a, b, c = path[k - 1], path[k], path[k + 1]
            collider = g.has_directed(a, b) and g.has_directed(c, b)
            if collider:
                if not (oracle_descendants(g, b) & z):
                    active = False
                    break
            elif b in z:
                active = False
                break
        if active:
            return False
    return True


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
