"""Community detection: divisive edge-betweenness (EB), greedy agglomerative
modularity optimization (MO), asynchronous label propagation (LP), and
constrained label propagation for package refinement.

Every run is a pure function of (graph, seed); EB is fully deterministic.
Modularity comparisons inside the detectors use exact integer numerators over
the constant denominator 4*m^2, so ties never depend on float rounding.
"""

from __future__ import annotations

import random
import warnings
from collections import Counter, deque
from dataclasses import dataclass
from typing import Hashable, Iterable

from .errors import GraphError, SizeCapError
from .graph import ClassGraph, Partition, WeightedGraph, collapse_to_weighted
from .metrics import modularity_numerator

EB_DEFAULT_EDGE_CAP = 5000
LP_DEFAULT_SWEEP_CAP = 1000


@dataclass(frozen=True)
class DendrogramLevel:
    n_communities: int
    q: float


@dataclass
class Dendrogram:
    """Merge/split sweep with the modularity recorded at every level."""

    levels: list[DendrogramLevel]
    best_index: int

    @property
    def best(self) -> DendrogramLevel:
        return self.levels[self.best_index]


def _components(adj: dict[int, set[int]]) -> dict[int, int]:
    """Component index per node; indices assigned in ascending node order."""
    labels: dict[int, int] = {}
    comp = 0
    for start in sorted(adj):
        if start in labels:
            continue
        labels[start] = comp
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in labels:
                    labels[v] = comp
                    queue.append(v)
        comp += 1
    return labels


def _edge_betweenness(adj: dict[int, set[int]]) -> dict[tuple[int, int], float]:
    """Brandes accumulation over hop-count shortest paths.

    The score of an edge is the number of unordered node pairs whose shortest
    paths traverse it, split equally among equal-length alternatives.
    """
    scores: dict[tuple[int, int], float] = {
        (u, v) if u < v else (v, u): 0.0
        for u in adj for v in adj[u]
    }
    for source in adj:
        sigma = {source: 1.0}
        dist = {source: 0}
        order: list[int] = []
        preds: dict[int, list[int]] = {source: []}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    sigma[v] = 0.0
                    preds[v] = []
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = {u: 0.0 for u in order}
        for w in reversed(order):
            for u in preds[w]:
                contribution = sigma[u] / sigma[w] * (1.0 + delta[w])
                key = (u, w) if u < w else (w, u)
                scores[key] += contribution
                delta[u] += contribution
    # Each unordered pair was counted from both endpoints.
    return {edge: score / 2.0 for edge, score in scores.items()}


def edge_betweenness(wgraph: WeightedGraph) -> dict[tuple[int, int], float]:
    """Edge betweenness of a simple graph; weights are not used as distances."""
    adj = {u: set(wgraph.neighbors(u)) for u in range(wgraph.n_nodes)}
    return _edge_betweenness(adj)


def detect_eb(
    graph: ClassGraph,
    max_edges: int = EB_DEFAULT_EDGE_CAP,
) -> tuple[Partition, Dendrogram]:
    """Divisive detection: repeatedly cut the max-betweenness edge bundle.

    Betweenness runs on the collapsed simple graph with hop-count paths;
    removing an edge deletes the whole parallel bundle. Q is evaluated on the
    original multigraph whenever the component count grows, and the max-Q
    component partition is returned. Fully deterministic: betweenness ties
    break on the lexicographically smallest (min-id, max-id) pair.
    """
    if graph.n_nodes == 0:
        raise GraphError("empty graph")
    collapsed = collapse_to_weighted(graph)
    if collapsed.n_edges > max_edges:
        raise SizeCapError(
            f"collapsed graph has {collapsed.n_edges} edges "
            f"(cap {max_edges}); use the MO or LP algorithm instead"
        )
    adj = {u: set(collapsed.neighbors(u)) for u in range(collapsed.n_nodes)}
    denom = 4 * graph.m ** 2 if graph.m else 1

    labels = _components(adj)
    partition = Partition(labels)
    best_num = modularity_numerator(graph, partition)
    best_partition = partition
    n_components = partition.n_blocks
    levels = [DendrogramLevel(n_components, best_num / denom)]
    best_index = 0

    while any(adj[u] for u in adj):
        scores = _edge_betweenness(adj)
        cut = max(scores.items(), key=lambda kv: (kv[1], (-kv[0][0], -kv[0][1])))[0]
        u, v = cut
        adj[u].discard(v)
        adj[v].discard(u)
        labels = _components(adj)
        partition = Partition(labels)
        if partition.n_blocks > n_components:
            n_components = partition.n_blocks
            num = modularity_numerator(graph, partition)
            levels.append(DendrogramLevel(n_components, num / denom))
            if num > best_num:
                best_num = num
                best_partition = partition
                best_index = len(levels) - 1
    return best_partition.relabel_dense(), Dendrogram(levels, best_index)


def detect_mo(graph: ClassGraph, seed: int) -> tuple[Partition, Dendrogram]:
    """Greedy agglomeration: merge the connected community pair of maximal
    modularity gain until no connected pair remains; return the sweep's best.

    Ties among maximal-gain pairs break uniformly at random under the seed.
    """
    if graph.n_nodes == 0:
        raise GraphError("empty graph")
    rng = random.Random(seed)
    m = graph.m
    denom = 4 * m ** 2 if m else 1
    n = graph.n_nodes

    comm = list(range(n))
    deg = {c: graph.degree[c] for c in range(n)}
    members: dict[int, list[int]] = {c: [c] for c in range(n)}
    between: dict[tuple[int, int], int] = {}
    for u, v, _ in graph.edges:
        key = (u, v) if u < v else (v, u)
        between[key] = between.get(key, 0) + 1

    q_num = -sum(k * k for k in graph.degree)
    best_num = q_num
    best_labels = list(comm)
    levels = [DendrogramLevel(n, q_num / denom)]
    best_index = 0

    while between:
        # Gain of merging (c, d) is 2*(2m*e_cd - d_c*d_d) on the numerator scale.
        best_score = max(2 * m * e - deg[c] * deg[d]
                         for (c, d), e in between.items())
        ties = sorted(
            key for key, e in between.items()
            if 2 * m * e - deg[key[0]] * deg[key[1]] == best_score
        )
        c, d = ties[rng.randrange(len(ties))] if len(ties) > 1 else ties[0]
        # Merge d into c.
        for node in members[d]:
            comm[node] = c
        members[c].extend(members.pop(d))
        deg[c] += deg.pop(d)
        merged: dict[tuple[int, int], int] = {}
        for (a, b), e in between.items():
            if (a, b) == (c, d):
                continue
            if a == d:
                a = c
            if b == d:
                b = c
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            merged[key] = merged.get(key, 0) + e
        between = merged
        q_num += 2 * best_score
        levels.append(DendrogramLevel(len(members), q_num / denom))
        if q_num > best_num:
            best_num = q_num
            best_labels = list(comm)
            best_index = len(levels) - 1
    partition = Partition(dict(enumerate(best_labels))).relabel_dense()
    return partition, Dendrogram(levels, best_index)


def _lp_sweeps(
    graph: ClassGraph,
    labels: dict[int, Hashable],
    rng: random.Random,
    max_sweeps: int,
) -> None:
    """Asynchronous label-propagation sweeps until the fixpoint, in place.

    A node adopts the label of maximal multiplicity-weighted frequency among
    its neighbors, ties uniform under the rng. Nodes without neighbors keep
    their label.
    """
    nodes = list(range(graph.n_nodes))

    def maximal_labels(node: int) -> list[Hashable]:
        freq: Counter = Counter()
        for neighbor, mult in graph.neighbors(node).items():
            freq[labels[neighbor]] += mult
        if not freq:
            return [labels[node]]
        top = max(freq.values())
        return [lbl for lbl, w in freq.items() if w == top]

    def at_fixpoint() -> bool:
        return all(labels[u] in maximal_labels(u) for u in nodes)

    for _ in range(max_sweeps):
        if at_fixpoint():
            return
        rng.shuffle(nodes)
        for u in nodes:
            candidates = sorted(maximal_labels(u), key=str)
            labels[u] = candidates[rng.randrange(len(candidates))] \
                if len(candidates) > 1 else candidates[0]
    warnings.warn(
        f"label propagation hit the sweep cap ({max_sweeps}) before reaching "
        "a fixpoint; returning the current labeling",
        RuntimeWarning,
    )


def detect_lp(
    graph: ClassGraph,
    seed: int,
    max_sweeps: int = LP_DEFAULT_SWEEP_CAP,
) -> Partition:
    """Label propagation from unique initial labels, densely relabeled."""
    if graph.n_nodes == 0:
        raise GraphError("empty graph")
    rng = random.Random(seed)
    labels: dict[int, Hashable] = {u: u for u in range(graph.n_nodes)}
    _lp_sweeps(graph, labels, rng, max_sweeps)
    return Partition(labels).relabel_dense()


def refine_packages(
    graph: ClassGraph,
    initial: Partition,
    seed: int,
    max_sweeps: int = LP_DEFAULT_SWEEP_CAP,
) -> Partition:
    """Refine and merge an existing partition by label propagation.

    Sweeps start from the given labels, so the output label set is a subset
    of the input's and original identifiers survive for comprehension.
    """
    if not initial.covers(graph):
        raise GraphError("initial partition does not cover the graph")
    rng = random.Random(seed)
    labels = dict(initial.labels)
    _lp_sweeps(graph, labels, rng, max_sweeps)
    result = Partition(labels)
    assert result.label_set() <= initial.label_set()
    return result
