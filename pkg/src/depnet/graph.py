"""Undirected multigraph of class nodes and typed dependency edges.

Nodes carry dense integer ids backed by a stable fully-qualified-name table.
Parallel edges are preserved; self-loops are dropped at construction.
"""

from __future__ import annotations

from collections import Counter, deque
from enum import Enum
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import GraphError

Label = Hashable


class DependencyKind(Enum):
    INHERITANCE = "inheritance"
    FIELD = "field"
    PARAMETER = "parameter"
    RETURN = "return"

    @classmethod
    def from_token(cls, token: str) -> "DependencyKind":
        try:
            return cls(token)
        except ValueError:
            raise GraphError(f"unknown dependency kind {token!r}") from None


class Partition:
    """Total assignment of node ids to labels; blocks are derived lazily."""

    def __init__(self, labels: Mapping[int, Label]):
        self._labels = dict(labels)
        self._blocks: dict[Label, frozenset[int]] | None = None

    @property
    def labels(self) -> dict[int, Label]:
        return dict(self._labels)

    def label_of(self, node: int) -> Label:
        return self._labels[node]

    @property
    def blocks(self) -> dict[Label, frozenset[int]]:
        if self._blocks is None:
            acc: dict[Label, set[int]] = {}
            for node, label in self._labels.items():
                acc.setdefault(label, set()).add(node)
            self._blocks = {lbl: frozenset(nodes) for lbl, nodes in acc.items()}
        return dict(self._blocks)

    @property
    def n_blocks(self) -> int:
        return len(set(self._labels.values()))

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self._labels)

    def label_set(self) -> set[Label]:
        return set(self._labels.values())

    def block_sizes(self) -> list[int]:
        return sorted(Counter(self._labels.values()).values())

    def relabel_dense(self) -> "Partition":
        """Map labels to 0..k-1 in order of each block's smallest node id."""
        first_node: dict[Label, int] = {}
        for node in sorted(self._labels):
            first_node.setdefault(self._labels[node], node)
        order = sorted(first_node, key=first_node.get)
        remap = {lbl: i for i, lbl in enumerate(order)}
        return Partition({node: remap[lbl] for node, lbl in self._labels.items()})

    def covers(self, graph: "ClassGraph") -> bool:
        return self.nodes == frozenset(range(graph.n_nodes))

    def same_blocks(self, other: "Partition") -> bool:
        """True when both partitions induce the same grouping, labels aside."""
        return set(self.blocks.values()) == set(other.blocks.values())

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self._labels == other._labels

    def __hash__(self) -> int:
        return hash(frozenset(self._labels.items()))

    def __repr__(self) -> str:
        return f"Partition({self.n_blocks} blocks, {len(self)} nodes)"


class ClassGraph:
    """Immutable undirected multigraph. Edges are (u, v, kind) with u < v."""

    def __init__(self, fqns: Sequence[str], edges: Iterable[tuple[int, int, DependencyKind]]):
        self._fqns = tuple(fqns)
        if len(set(self._fqns)) != len(self._fqns):
            raise GraphError("duplicate node fqns")
        self._index = {fqn: i for i, fqn in enumerate(self._fqns)}
        n = len(self._fqns)
        norm = []
        degree = [0] * n
        adj: list[Counter] = [Counter() for _ in range(n)]
        for u, v, kind in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge endpoint out of range: ({u}, {v})")
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if u > v:
                u, v = v, u
            norm.append((u, v, kind))
            degree[u] += 1
            degree[v] += 1
            adj[u][v] += 1
            adj[v][u] += 1
        self._edges = tuple(norm)
        self._degree = tuple(degree)
        self._adj = tuple(adj)

    @property
    def fqns(self) -> tuple[str, ...]:
        return self._fqns

    @property
    def edges(self) -> tuple[tuple[int, int, DependencyKind], ...]:
        return self._edges

    @property
    def n_nodes(self) -> int:
        return len(self._fqns)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def degree(self) -> tuple[int, ...]:
        return self._degree

    def id_of(self, fqn: str) -> int:
        try:
            return self._index[fqn]
        except KeyError:
            raise GraphError(f"unknown class fqn {fqn!r}") from None

    def fqn_of(self, node: int) -> str:
        return self._fqns[node]

    def neighbors(self, node: int) -> Counter:
        """Neighbor -> edge multiplicity."""
        return self._adj[node]

    def multiplicity(self, u: int, v: int) -> int:
        return self._adj[u][v]

    def __repr__(self) -> str:
        return f"ClassGraph({self.n_nodes} nodes, {self.m} edges)"


class WeightedGraph:
    """Simple undirected graph with integer edge weights (collapsed multigraph)."""

    def __init__(self, fqns: Sequence[str], weights: Mapping[tuple[int, int], int]):
        self.fqns = tuple(fqns)
        self.weights: dict[tuple[int, int], int] = {}
        self._adj: dict[int, dict[int, int]] = {i: {} for i in range(len(self.fqns))}
        for (u, v), w in weights.items():
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if u > v:
                u, v = v, u
            self.weights[(u, v)] = self.weights.get((u, v), 0) + w
            self._adj[u][v] = self._adj[u].get(v, 0) + w
            self._adj[v][u] = self._adj[v].get(u, 0) + w

    @property
    def n_nodes(self) -> int:
        return len(self.fqns)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())

    def neighbors(self, node: int) -> dict[int, int]:
        return self._adj[node]


def build_graph(
    class_fqns: Sequence[str],
    dependencies: Iterable[tuple[str, str, DependencyKind]],
) -> ClassGraph:
    """Build a multigraph from fqn-keyed dependency tuples.

    Parallel edges are kept; self-referential dependencies are silently dropped.
    """
    fqns = tuple(class_fqns)
    if not fqns:
        raise GraphError("empty class list")
    if len(set(fqns)) != len(fqns):
        raise GraphError("duplicate class fqns")
    index = {fqn: i for i, fqn in enumerate(fqns)}
    edges = []
    for src, dst, kind in dependencies:
        for endpoint in (src, dst):
            if endpoint not in index:
                raise GraphError(f"dependency endpoint {endpoint!r} not in class list")
        if src == dst:
            continue
        edges.append((index[src], index[dst], kind))
    return ClassGraph(fqns, edges)


def remove_isolated(graph: ClassGraph) -> ClassGraph:
    """Drop all degree-zero nodes, re-densifying ids; idempotent."""
    keep = [i for i in range(graph.n_nodes) if graph.degree[i] >= 1]
    if len(keep) == graph.n_nodes:
        return graph
    remap = {old: new for new, old in enumerate(keep)}
    fqns = [graph.fqn_of(i) for i in keep]
    edges = [(remap[u], remap[v], k) for u, v, k in graph.edges]
    return ClassGraph(fqns, edges)


def connected_components(graph: ClassGraph) -> Partition:
    """Label every node with the index of its connected component."""
    labels: dict[int, int] = {}
    comp = 0
    for start in range(graph.n_nodes):
        if start in labels:
            continue
        queue = deque([start])
        labels[start] = comp
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if v not in labels:
                    labels[v] = comp
                    queue.append(v)
        comp += 1
    return Partition(labels)


def induced_subgraph(graph: ClassGraph, node_set: Iterable[int]) -> ClassGraph:
    """Subgraph on node_set; keeps exactly the edges with both endpoints inside."""
    nodes = sorted(set(node_set))
    for node in nodes:
        if not (0 <= node < graph.n_nodes):
            raise GraphError(f"unknown node id {node}")
    remap = {old: new for new, old in enumerate(nodes)}
    fqns = [graph.fqn_of(i) for i in nodes]
    edges = [
        (remap[u], remap[v], k)
        for u, v, k in graph.edges
        if u in remap and v in remap
    ]
    return ClassGraph(fqns, edges)


def collapse_to_weighted(graph: ClassGraph) -> WeightedGraph:
    """Merge parallel edges into a single edge weighted by multiplicity."""
    weights: Counter = Counter()
    for u, v, _ in graph.edges:
        weights[(u, v)] += 1
    return WeightedGraph(graph.fqns, weights)
