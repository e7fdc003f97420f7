"""Mixed-graph data model and the graph machinery shared by discovery and metrics.

A :class:`MixedGraph` stores one mark per unordered node pair, so the two
directed views of a pair can never disagree. All graph values are immutable
after construction; every operation here is a pure function returning a new
value, which makes them safe to share across parallel workers.
"""

from __future__ import annotations

import enum
import io
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

log = logging.getLogger(__name__)


class GraphError(ValueError):
    """Invalid graph construction or operation input."""

    code = "graph_error"


class CyclicGraphError(GraphError):
    """An operation requiring a DAG received a cyclic graph."""

    code = "cyclic_graph"


class Mark(enum.Enum):
    """State of an ordered pair query (i, j)."""

    NONE = "none"
    FORWARD = "-->"  # i -> j
    BACKWARD = "<--"  # j -> i
    UNDIRECTED = "---"

    def flipped(self) -> "Mark":
        if self is Mark.FORWARD:
            return Mark.BACKWARD
        if self is Mark.BACKWARD:
            return Mark.FORWARD
        return self


class MixedGraph:
    """Node-labeled graph with per-pair marks: none, directed, or undirected.

    Nodes may be referenced by name or by positional index. The pair-mark
    table is keyed on unordered pairs; ``mark(i, j)`` and ``mark(j, i)``
    always return mirrored views of the same state.
    """

    __slots__ = ("_nodes", "_index", "_marks")

    def __init__(
        self,
        nodes: Sequence[str],
        directed: Iterable[tuple] = (),
        undirected: Iterable[tuple] = (),
    ):
        nodes = tuple(str(n) for n in nodes)
        if len(set(nodes)) != len(nodes):
            raise GraphError("node names must be unique")
        if any(not n for n in nodes):
            raise GraphError("node names must be non-empty")
        self._nodes = nodes
        self._index = {name: i for i, name in enumerate(nodes)}
        self._marks: dict[tuple[int, int], Mark] = {}
        for a, b in directed:
            self._set(self._idx(a), self._idx(b), Mark.FORWARD, fresh=True)
        for a, b in undirected:
            self._set(self._idx(a), self._idx(b), Mark.UNDIRECTED, fresh=True)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_marks(cls, nodes: Sequence[str], marks: Mapping[tuple[int, int], Mark]) -> "MixedGraph":
        g = cls(nodes)
        for (i, j), m in marks.items():
            if m is not Mark.NONE:
                g._set(i, j, m, fresh=True)
        return g

    @classmethod
    def from_adjacency(cls, nodes: Sequence[str], matrix: np.ndarray) -> "MixedGraph":
        """Build from a 0/1 matrix where ``a[i, j] = 1`` means i -> j and a
        symmetric pair of 1s means an undirected edge."""
        a = np.asarray(matrix)
        n = len(nodes)
        if a.shape != (n, n):
            raise GraphError(f"adjacency must be {n}x{n}, got {a.shape}")
        g = cls(nodes)
        for i in range(n):
            if a[i, i]:
                raise GraphError(f"self-loop at node {nodes[i]!r}")
            for j in range(i + 1, n):
                if a[i, j] and a[j, i]:
                    g._set(i, j, Mark.UNDIRECTED, fresh=True)
                elif a[i, j]:
                    g._set(i, j, Mark.FORWARD, fresh=True)
                elif a[j, i]:
                    g._set(i, j, Mark.BACKWARD, fresh=True)
        return g

    def _set(self, i: int, j: int, mark: Mark, fresh: bool = False) -> None:
        if i == j:
            raise GraphError(f"self-loop at node {self._nodes[i]!r}")
        key = (i, j) if i < j else (j, i)
        stored = mark if i < j else mark.flipped()
        if fresh and key in self._marks and self._marks[key] is not stored:
            raise GraphError(f"conflicting marks for pair ({self._nodes[i]}, {self._nodes[j]})")
        if stored is Mark.NONE:
            self._marks.pop(key, None)
        else:
            self._marks[key] = stored

    def _idx(self, node: "int | str") -> int:
        if isinstance(node, (int, np.integer)):
            i = int(node)
            if not 0 <= i < len(self._nodes):
                raise GraphError(f"node index {i} out of range")
            return i
        try:
            return self._index[node]
        except KeyError:
            raise GraphError(f"unknown node {node!r}") from None

    # -- queries --------------------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def n(self) -> int:
        return len(self._nodes)

    def index(self, node: "int | str") -> int:
        return self._idx(node)

    def mark(self, i: "int | str", j: "int | str") -> Mark:
        a, b = self._idx(i), self._idx(j)
        if a == b:
            return Mark.NONE
        key = (a, b) if a < b else (b, a)
        m = self._marks.get(key, Mark.NONE)
        return m if a < b else m.flipped()

    def adjacent(self, i, j) -> bool:
        return self.mark(i, j) is not Mark.NONE

    def has_directed(self, i, j) -> bool:
        """True iff the graph contains the directed edge i -> j."""
        return self.mark(i, j) is Mark.FORWARD

    def has_undirected(self, i, j) -> bool:
        return self.mark(i, j) is Mark.UNDIRECTED

    def parents(self, node) -> list[str]:
        """Names of nodes with a directed mark into ``node``."""
        j = self._idx(node)
        return [self._nodes[i] for i in range(self.n) if i != j and self.mark(i, j) is Mark.FORWARD]

    def children(self, node) -> list[str]:
        i = self._idx(node)
        return [self._nodes[j] for j in range(self.n) if j != i and self.mark(i, j) is Mark.FORWARD]

    def neighbors(self, node) -> list[str]:
        """Names of nodes connected to ``node`` by an undirected mark."""
        i = self._idx(node)
        return [self._nodes[j] for j in range(self.n) if j != i and self.mark(i, j) is Mark.UNDIRECTED]

    def adjacencies(self, node) -> list[str]:
        i = self._idx(node)
        return [self._nodes[j] for j in range(self.n) if j != i and self.adjacent(i, j)]

    def pairs(self) -> Iterator[tuple[str, str, Mark]]:
        """All connected unordered pairs as (name_i, name_j, mark) with i < j."""
        for (i, j), m in sorted(self._marks.items()):
            yield self._nodes[i], self._nodes[j], m

    def edge_count(self) -> int:
        return len(self._marks)

    def has_undirected_marks(self) -> bool:
        return any(m is Mark.UNDIRECTED for m in self._marks.values())

    def to_adjacency(self) -> np.ndarray:
        """0/1 matrix per the adjacency CSV convention."""
        a = np.zeros((self.n, self.n), dtype=int)
        for (i, j), m in self._marks.items():
            if m is Mark.FORWARD:
                a[i, j] = 1
            elif m is Mark.BACKWARD:
                a[j, i] = 1
            else:
                a[i, j] = a[j, i] = 1
        return a

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._marks == other._marks

    def __hash__(self):
        return hash((self._nodes, frozenset(self._marks.items())))

    def __repr__(self) -> str:
        edges = ", ".join(f"{a}{m.value}{b}" for a, b, m in self.pairs())
        return f"MixedGraph({len(self._nodes)} nodes: {edges or 'no edges'})"


@dataclass(frozen=True)
class WeightedGraph:
    """MixedGraph plus an edge-coefficient matrix (0 where there is no edge).

    ``weights[i, j]`` is the coefficient on the directed edge i -> j; any
    nonzero weight requires that directed mark to be present.
    """

    graph: MixedGraph
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        n = self.graph.n
        if w.shape != (n, n):
            raise GraphError(f"weights must be {n}x{n}, got {w.shape}")
        for i in range(n):
            for j in range(n):
                if w[i, j] != 0 and not self.graph.has_directed(i, j):
                    raise GraphError(
                        f"nonzero weight at ({self.graph.nodes[i]}, {self.graph.nodes[j]}) without a directed edge"
                    )

    @classmethod
    def from_weights(cls, nodes: Sequence[str], weights: np.ndarray) -> "WeightedGraph":
        w = np.asarray(weights, dtype=float)
        n = len(nodes)
        if w.shape != (n, n):
            raise GraphError(f"weights must be {n}x{n}, got {w.shape}")
        directed = []
        for i in range(n):
            if w[i, i] != 0:
                raise GraphError(f"self-loop weight at node {nodes[i]!r}")
            for j in range(i + 1, n):
                if w[i, j] != 0 and w[j, i] != 0:
                    raise GraphError(f"two-cycle between {nodes[i]!r} and {nodes[j]!r}")
                if w[i, j] != 0:
                    directed.append((i, j))
                elif w[j, i] != 0:
                    directed.append((j, i))
        return cls(MixedGraph(nodes, directed=directed), w)


@dataclass(frozen=True)
class GraphStats:
    """Summary shown alongside a result graph: counts, density, causes table."""

    node_count: int
    edge_count: int
    density: float
    causes: dict[str, list[str]] = field(default_factory=dict)


# -- mutable working representation ------------------------------------------


class PDag:
    """Index-based mutable partially directed graph used inside algorithms.

    Not part of the public data model; convert with :meth:`to_graph` once an
    algorithm is done mutating.
    """

    __slots__ = ("n", "_marks")

    def __init__(self, n: int):
        self.n = n
        self._marks: dict[tuple[int, int], Mark] = {}

    @classmethod
    def from_graph(cls, g: MixedGraph) -> "PDag":
        p = cls(g.n)
        p._marks = dict(g._marks)
        return p

    @classmethod
    def complete(cls, n: int) -> "PDag":
        p = cls(n)
        for i in range(n):
            for j in range(i + 1, n):
                p._marks[(i, j)] = Mark.UNDIRECTED
        return p

    def copy(self) -> "PDag":
        p = PDag(self.n)
        p._marks = dict(self._marks)
        return p

    def mark(self, i: int, j: int) -> Mark:
        if i == j:
            return Mark.NONE
        key = (i, j) if i < j else (j, i)
        m = self._marks.get(key, Mark.NONE)
        return m if i < j else m.flipped()

    def set(self, i: int, j: int, mark: Mark) -> None:
        key = (i, j) if i < j else (j, i)
        stored = mark if i < j else mark.flipped()
        if stored is Mark.NONE:
            self._marks.pop(key, None)
        else:
            self._marks[key] = stored

    def orient(self, i: int, j: int) -> None:
        """Set the pair state to the directed edge i -> j."""
        self.set(i, j, Mark.FORWARD)

    def remove(self, i: int, j: int) -> None:
        self.set(i, j, Mark.NONE)

    def adjacent(self, i: int, j: int) -> bool:
        return self.mark(i, j) is not Mark.NONE

    def has_directed(self, i: int, j: int) -> bool:
        return self.mark(i, j) is Mark.FORWARD

    def has_undirected(self, i: int, j: int) -> bool:
        return self.mark(i, j) is Mark.UNDIRECTED

    def parents(self, j: int) -> list[int]:
        return [i for i in range(self.n) if self.mark(i, j) is Mark.FORWARD]

    def children(self, i: int) -> list[int]:
        return [j for j in range(self.n) if self.mark(i, j) is Mark.FORWARD]

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.n) if self.mark(i, j) is Mark.UNDIRECTED]

    def adjacencies(self, i: int) -> list[int]:
        return [j for j in range(self.n) if j != i and self.adjacent(i, j)]

    def undirected_pairs(self) -> list[tuple[int, int]]:
        return sorted(k for k, m in self._marks.items() if m is Mark.UNDIRECTED)

    def directed_cycle_free(self) -> bool:
        return _directed_acyclic(self)

    def to_graph(self, nodes: Sequence[str]) -> MixedGraph:
        return MixedGraph.from_marks(nodes, dict(self._marks))


def _directed_acyclic(g: "PDag | MixedGraph") -> bool:
    """Kahn's algorithm over the directed marks only."""
    n = g.n
    indeg = [0] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and g.mark(i, j) is Mark.FORWARD:
                indeg[j] += 1
                children[i].append(j)
    queue = deque(i for i in range(n) if indeg[i] == 0)
    seen = 0
    while queue:
        u = queue.popleft()
        seen += 1
        for v in children[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen == n


def is_dag(g: MixedGraph) -> bool:
    """True iff g has no undirected marks and its directed part is acyclic."""
    return not g.has_undirected_marks() and _directed_acyclic(g)


def _require_dag(g: MixedGraph, op: str) -> None:
    if g.has_undirected_marks():
        raise GraphError(f"{op} requires a fully directed graph")
    if not _directed_acyclic(g):
        raise CyclicGraphError(f"{op} requires an acyclic graph")


# -- reachability and separation ----------------------------------------------


def descendants(g: MixedGraph, node) -> set[str]:
    """All nodes reachable from ``node`` via directed edges, itself included."""
    start = g.index(node)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in range(g.n):
            if v not in seen and g.mark(u, v) is Mark.FORWARD:
                seen.add(v)
                stack.append(v)
    return {g.nodes[i] for i in seen}


def d_separated(g: MixedGraph, i, j, z: Iterable) -> bool:
    """Bayes-ball d-separation test: are i and j separated given the set z?

    The graph must be a DAG. A node with a descendant in z re-opens collider
    flow; that set is precomputed by walking ancestors of z.
    """
    _require_dag(g, "d-separation")
    a, b = g.index(i), g.index(j)
    zset = {g.index(v) for v in z}
    if a == b:
        raise GraphError("i and j must be distinct")
    if a in zset or b in zset:
        raise GraphError("i and j must not be in the conditioning set")

    parents = [[] for _ in range(g.n)]
    children = [[] for _ in range(g.n)]
    for u in range(g.n):
        for v in range(g.n):
            if u != v and g.mark(u, v) is Mark.FORWARD:
                children[u].append(v)
                parents[v].append(u)

    # ancestors of z (z included) = nodes with a descendant in z
    opens_collider = set(zset)
    stack = list(zset)
    while stack:
        v = stack.pop()
        for p in parents[v]:
            if p not in opens_collider:
                opens_collider.add(p)
                stack.append(p)

    # ball states: (node, arrived-from-child?)
    queue = deque([(a, True), (a, False)])
    visited = set()
    while queue:
        v, from_child = queue.popleft()
        if (v, from_child) in visited:
            continue
        visited.add((v, from_child))
        if v == b:
            return False
        if v in zset:
            if from_child:
                continue  # blocked
            for p in parents[v]:  # observed collider bounces to parents
                queue.append((p, True))
        else:
            if from_child:
                for p in parents[v]:
                    queue.append((p, True))
                for c in children[v]:
                    queue.append((c, False))
            else:
                for c in children[v]:
                    queue.append((c, False))
                if v in opens_collider:  # collider opened by a descendant in z
                    for p in parents[v]:
                        queue.append((p, True))
    return True


# -- v-structures, Meek closure, CPDAG ----------------------------------------


def v_structures(g: "MixedGraph | PDag") -> list[tuple]:
    """Ordered triples (a, b, c) with a -> b <- c, a and c non-adjacent, and
    a before c in node order."""
    named = isinstance(g, MixedGraph)
    out = []
    for b in range(g.n):
        if named:
            parents = [g.index(p) for p in g.parents(b)]
        else:
            parents = g.parents(b)
        for x in range(len(parents)):
            for y in range(x + 1, len(parents)):
                a, c = sorted((parents[x], parents[y]))
                if not g.adjacent(a, c):
                    out.append((a, b, c))
    out.sort()
    if named:
        return [(g.nodes[a], g.nodes[b], g.nodes[c]) for a, b, c in out]
    return out


def _meek_pass(p: PDag) -> bool:
    """One sweep of Meek rules R1-R4; returns True if anything was oriented."""
    changed = False
    for a, b in [(x, y) for x in range(p.n) for y in range(p.n) if x != y]:
        if not p.has_undirected(a, b):
            continue
        # R1: c -> a, a - b, c and b non-adjacent  =>  a -> b
        if any(p.has_directed(c, a) and not p.adjacent(c, b) for c in range(p.n) if c not in (a, b)):
            p.orient(a, b)
            changed = True
            continue
        # R2: a -> c -> b with a - b  =>  a -> b
        if any(p.has_directed(a, c) and p.has_directed(c, b) for c in range(p.n) if c not in (a, b)):
            p.orient(a, b)
            changed = True
            continue
        # R3: a - c, a - d, c -> b, d -> b, c and d non-adjacent  =>  a -> b
        spokes = [c for c in range(p.n) if c not in (a, b) and p.has_undirected(a, c) and p.has_directed(c, b)]
        if any(
            not p.adjacent(c, d)
            for ci, c in enumerate(spokes)
            for d in spokes[ci + 1 :]
        ):
            p.orient(a, b)
            changed = True
            continue
        # R4: a - c, c -> d, d -> b, c and b non-adjacent  =>  a -> b
        fired = False
        for c in range(p.n):
            if c in (a, b) or not p.has_undirected(a, c) or p.adjacent(c, b):
                continue
            if any(p.has_directed(c, d) and p.has_directed(d, b) for d in range(p.n) if d not in (a, b, c)):
                fired = True
                break
        if fired:
            p.orient(a, b)
            changed = True
    return changed


def meek_close(g: MixedGraph) -> MixedGraph:
    """Apply Meek orientation rules R1-R4 to a fixpoint.

    Rules only ever orient undirected pairs, so they cannot contradict an
    existing directed mark or each other.
    """
    p = PDag.from_graph(g)
    while _meek_pass(p):
        pass
    return p.to_graph(g.nodes)


def cpdag_of(g: MixedGraph) -> MixedGraph:
    """Canonical equivalence-class representative of a DAG: keep v-structure
    orientations, undirect everything else, then Meek-close."""
    _require_dag(g, "cpdag_of")
    p = PDag(g.n)
    for a, b, m in g.pairs():
        p.set(g.index(a), g.index(b), Mark.UNDIRECTED)
    for a, b, c in v_structures(g):
        p.orient(g.index(a), g.index(b))
        p.orient(g.index(c), g.index(b))
    while _meek_pass(p):
        pass
    return p.to_graph(g.nodes)


def consistent_extension(g: MixedGraph) -> MixedGraph:
    """One DAG extension of a PDAG that preserves every directed edge and
    creates no new v-structure (Dor-Tarsi sink elimination).

    Raises GraphError when no consistent extension exists.
    """
    p = PDag.from_graph(g)
    out = PDag.from_graph(g)
    remaining = set(range(g.n))
    while remaining:
        found = None
        for x in sorted(remaining):
            if any(p.has_directed(x, c) for c in remaining if c != x):
                continue  # not a sink in the directed part
            nbrs = [y for y in remaining if y != x and p.has_undirected(x, y)]
            adj = [y for y in remaining if y != x and p.adjacent(x, y)]
            ok = all(all(y == other or p.adjacent(y, other) for other in adj) for y in nbrs)
            if ok:
                found = x
                break
        if found is None:
            raise GraphError("graph admits no consistent DAG extension")
        for y in remaining:
            if y != found and p.has_undirected(found, y):
                out.orient(y, found)
        remaining.discard(found)
        for y in list(remaining):
            if p.adjacent(found, y):
                p.remove(found, y)
    dag = out.to_graph(g.nodes)
    if not is_dag(dag):
        raise GraphError("graph admits no consistent DAG extension")
    return dag


def enumerate_extensions(g: MixedGraph) -> Iterator[MixedGraph]:
    """Yield every DAG in the equivalence class described by a CPDAG.

    Extensions keep the skeleton and directed edges and introduce no new
    v-structures. Enumeration is exponential in the number of undirected
    edges; callers cap the graph size.
    """
    base = PDag.from_graph(g)
    pending = base.undirected_pairs()

    def new_collider(p: PDag, a: int, b: int) -> bool:
        # after orienting a -> b: another parent c of b non-adjacent to a?
        return any(p.has_directed(c, b) and not p.adjacent(c, a) for c in range(p.n) if c not in (a, b))

    def creates_cycle(p: PDag, a: int, b: int) -> bool:
        # path b ~> a through directed edges?
        seen = {b}
        stack = [b]
        while stack:
            u = stack.pop()
            if u == a:
                return True
            for v in p.children(u):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    target_vs = set(v_structures(base))

    def rec(p: PDag, k: int) -> Iterator[PDag]:
        if k == len(pending):
            if p.directed_cycle_free() and set(v_structures(p)) == target_vs:
                yield p
            return
        i, j = pending[k]
        for a, b in ((i, j), (j, i)):
            if creates_cycle(p, a, b) or new_collider(p, a, b):
                continue
            q = p.copy()
            q.orient(a, b)
            yield from rec(q, k + 1)

    for solved in rec(base, 0):
        yield solved.to_graph(g.nodes)


# -- stats and serialization ---------------------------------------------------


def graph_stats(g: MixedGraph) -> GraphStats:
    """Edge count over connected unordered pairs, density against C(n, 2),
    and the causes table (directed parents per node)."""
    n = g.n
    edges = g.edge_count()
    density = edges / (n * (n - 1) / 2) if n >= 2 else 0.0
    causes = {name: g.parents(name) for name in g.nodes}
    return GraphStats(node_count=n, edge_count=edges, density=density, causes=causes)


def _read_rows(source) -> list[list[str]]:
    import csv as _csv

    if hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    return [row for row in _csv.reader(io.StringIO(text)) if row]


def read_adjacency_csv(source, expected_names: Sequence[str] | None = None) -> MixedGraph:
    """Parse an adjacency CSV: header row of node names, square 0/1 body.

    ``a[i, j] = 1`` means i -> j; symmetric 1s encode an undirected pair.
    ``expected_names`` (when given) must match the header exactly, in order.
    """
    rows = _read_rows(source)
    if not rows:
        raise GraphError("empty adjacency file")
    names = [c.strip() for c in rows[0]]
    body = rows[1:]
    if expected_names is not None and names != list(expected_names):
        raise GraphError(
            f"adjacency header mismatch: expected {list(expected_names)}, got {names}"
        )
    n = len(names)
    if len(body) != n or any(len(r) != n for r in body):
        raise GraphError(f"adjacency matrix must be {n}x{n} to match its header")
    matrix = np.zeros((n, n), dtype=int)
    for i, row in enumerate(body):
        for j, cell in enumerate(row):
            tok = cell.strip()
            if tok == "0":
                continue
            if tok == "1":
                matrix[i, j] = 1
            else:
                raise GraphError(f"unknown cell token {cell!r} at row {i + 1}, column {j + 1}")
    return MixedGraph.from_adjacency(names, matrix)


def write_adjacency_csv(g: MixedGraph, target=None) -> str:
    """Render the adjacency CSV; optionally also write it to a path/file."""
    a = g.to_adjacency()
    lines = [",".join(g.nodes)]
    for row in a:
        lines.append(",".join(str(int(v)) for v in row))
    text = "\n".join(lines) + "\n"
    _write_text(target, text)
    return text


def read_weighted_csv(source, expected_names: Sequence[str] | None = None) -> WeightedGraph:
    """Parse a real-valued adjacency CSV into a weighted directed graph."""
    rows = _read_rows(source)
    if not rows:
        raise GraphError("empty adjacency file")
    names = [c.strip() for c in rows[0]]
    if expected_names is not None and names != list(expected_names):
        raise GraphError(
            f"adjacency header mismatch: expected {list(expected_names)}, got {names}"
        )
    n = len(names)
    body = rows[1:]
    if len(body) != n or any(len(r) != n for r in body):
        raise GraphError(f"adjacency matrix must be {n}x{n} to match its header")
    w = np.zeros((n, n), dtype=float)
    for i, row in enumerate(body):
        for j, cell in enumerate(row):
            try:
                w[i, j] = float(cell)
            except ValueError:
                raise GraphError(f"unknown cell token {cell!r} at row {i + 1}, column {j + 1}") from None
    return WeightedGraph.from_weights(names, w)


def write_weighted_csv(wg: WeightedGraph, target=None) -> str:
    lines = [",".join(wg.graph.nodes)]
    for row in wg.weights:
        lines.append(",".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    _write_text(target, text)
    return text


def _write_text(target, text: str) -> None:
    if target is None:
        return
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
