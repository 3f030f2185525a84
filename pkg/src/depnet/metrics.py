"""Quantitative measures: modularity, NMI, package connectedness, size
distributions with a power-law fit, and batch aggregation over seeded runs."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import GraphError
from .graph import ClassGraph, Label, Partition

SIGNIFICANT_Q = 0.30  # conventional threshold for meaningful community structure


def _check_cover(graph: ClassGraph, partition: Partition) -> None:
    if not partition.covers(graph):
        raise GraphError("partition does not cover the graph's node set")


def modularity_numerator(graph: ClassGraph, partition: Partition) -> int:
    """Exact integer numerator of Q over the denominator 4*m^2.

    Q = sum_c (l_c/m - (d_c/2m)^2) = [sum_c (4*m*l_c - d_c^2)] / (4*m^2),
    where l_c counts intra-community edges (with multiplicity) and d_c sums
    member degrees. Exact integers make tie handling in the detectors stable.
    """
    labels = partition.labels
    m = graph.m
    intra: Counter = Counter()
    deg_sum: Counter = Counter()
    for node, k in enumerate(graph.degree):
        deg_sum[labels[node]] += k
    for u, v, _ in graph.edges:
        if labels[u] == labels[v]:
            intra[labels[u]] += 1
    return sum(4 * m * intra[c] - deg_sum[c] ** 2 for c in deg_sum)


def modularity(graph: ClassGraph, partition: Partition) -> float:
    """Newman-Girvan modularity with the configuration null model.

    Multiplicities count: the adjacency entry for a node pair is the number
    of parallel edges between them.
    """
    if graph.m == 0:
        raise GraphError("modularity undefined for a graph with no edges")
    _check_cover(graph, partition)
    return modularity_numerator(graph, partition) / (4 * graph.m ** 2)


def nmi(a: Partition, b: Partition) -> float:
    """Normalized mutual information 2*I/(H(a)+H(b)) of two partitions.

    Natural-log entropies; the ratio is base-invariant. Two trivial
    single-block partitions compare as identical (NMI = 1).
    """
    if a.nodes != b.nodes:
        raise GraphError("partitions cover different node sets")
    n = len(a)
    if n == 0:
        raise GraphError("empty partitions")
    a_labels, b_labels = a.labels, b.labels
    count_a: Counter = Counter(a_labels.values())
    count_b: Counter = Counter(b_labels.values())
    joint: Counter = Counter((a_labels[i], b_labels[i]) for i in a.nodes)

    def entropy(counts: Counter) -> float:
        return -sum((c / n) * math.log(c / n) for c in counts.values())

    h_a, h_b = entropy(count_a), entropy(count_b)
    if h_a + h_b == 0.0:
        return 1.0
    info = 0.0
    for (la, lb), c in joint.items():
        p = c / n
        info += p * math.log(p * n * n / (count_a[la] * count_b[lb]))
    return 2.0 * info / (h_a + h_b)


def split_disconnected(graph: ClassGraph, partition: Partition) -> Partition:
    """Replace each block by the connected components of its induced subgraph.

    Components of a split block inherit the parent label with a numeric
    suffix; connected blocks keep their label. Idempotent.
    """
    _check_cover(graph, partition)
    labels: dict[int, Label] = {}
    for label, block in sorted(partition.blocks.items(), key=lambda kv: min(kv[1])):
        components = _components_within(graph, block)
        if len(components) == 1:
            for node in block:
                labels[node] = label
        else:
            for idx, component in enumerate(components, start=1):
                for node in component:
                    labels[node] = f"{label}#{idx}"
    return Partition(labels)


def _components_within(graph: ClassGraph, block: frozenset[int]) -> list[set[int]]:
    """Connected components of the subgraph induced by a block, by min node id."""
    seen: set[int] = set()
    components = []
    for start in sorted(block):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if v in block and v not in seen:
                    seen.add(v)
                    comp.add(v)
                    queue.append(v)
        components.append(comp)
    return components


@dataclass
class SizeDistribution:
    """Block-size multiset with its CCDF and an optional power-law exponent."""

    sizes: list[int]
    ccdf: dict[int, float]
    alpha: float | None = None
    xmin: int = 1

    def to_dict(self) -> dict:
        return {
            "sizes": self.sizes,
            "ccdf": [[s, self.ccdf[s]] for s in sorted(self.ccdf)],
            "alpha": self.alpha,
            "xmin": self.xmin,
        }


def size_distribution(partition: Partition, xmin: int = 1) -> SizeDistribution:
    """Sizes of the partition's blocks with the fraction of blocks >= each size."""
    if len(partition) == 0:
        raise GraphError("empty partition")
    sizes = partition.block_sizes()
    total = len(sizes)
    ccdf = {
        s: sum(1 for t in sizes if t >= s) / total
        for s in sorted(set(sizes))
    }
    return SizeDistribution(
        sizes=sizes,
        ccdf=ccdf,
        alpha=fit_power_law(sizes, xmin),
        xmin=xmin,
    )


def _hurwitz_zeta(s: float, a: int, cutoff: int = 64) -> float:
    """sum_{k>=a} k^-s via direct terms plus an Euler-Maclaurin tail."""
    k_tail = a + cutoff
    head = sum(k ** -s for k in range(a, k_tail))
    tail = (k_tail ** (1.0 - s) / (s - 1.0)
            + 0.5 * k_tail ** -s
            + s / 12.0 * k_tail ** (-s - 1.0)
            - s * (s + 1.0) * (s + 2.0) / 720.0 * k_tail ** (-s - 3.0))
    return head + tail


_ALPHA_LO, _ALPHA_HI = 1.0 + 1e-6, 20.0


def fit_power_law(sizes, xmin: int = 1, method: str = "discrete") -> float | None:
    """Maximum-likelihood exponent for P(s) ~ s^-alpha over sizes >= xmin.

    The default maximizes the exact discrete (zeta-normalized) likelihood,
    which stays unbiased down to xmin = 1. method="continuous" gives the
    closed-form continuous approximation with the -0.5 offset,
    alpha = 1 + n' / sum(ln(s_i / (xmin - 0.5))), adequate for larger xmin.
    Returns None (fit declined) with fewer than 3 qualifying sizes or when
    the discrete likelihood has no interior maximum (all sizes at xmin).
    """
    qualifying = [s for s in sizes if s >= xmin]
    if len(qualifying) < 3:
        return None
    if method == "continuous":
        log_sum = sum(math.log(s / (xmin - 0.5)) for s in qualifying)
        return 1.0 + len(qualifying) / log_sum
    if method != "discrete":
        raise GraphError(f"unknown power-law fit method {method!r}")
    n = len(qualifying)
    log_sizes = sum(math.log(s) for s in qualifying)

    def log_likelihood(alpha: float) -> float:
        return -alpha * log_sizes - n * math.log(_hurwitz_zeta(alpha, xmin))

    lo, hi = _ALPHA_LO, _ALPHA_HI
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if log_likelihood(m1) < log_likelihood(m2):
            lo = m1
        else:
            hi = m2
        if hi - lo < 1e-9:
            break
    alpha = (lo + hi) / 2.0
    if alpha > _ALPHA_HI - 1e-3:
        return None  # degenerate: likelihood increases without bound
    return alpha


@dataclass
class BatchStats:
    """Aggregate of seeded detection runs against a reference partition."""

    algorithm: str
    q_values: list[float] = field(default_factory=list)
    nmi_values: list[float] = field(default_factory=list)

    @property
    def mean_q(self) -> float:
        return sum(self.q_values) / len(self.q_values)

    @property
    def max_q(self) -> float:
        return max(self.q_values)

    @property
    def peak_nmi(self) -> float:
        return max(self.nmi_values)

    @property
    def significant(self) -> bool:
        return self.mean_q >= SIGNIFICANT_Q

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "runs": len(self.q_values),
            "q_values": self.q_values,
            "mean_q": self.mean_q,
            "max_q": self.max_q,
            "nmi_values": self.nmi_values,
            "peak_nmi": self.peak_nmi,
            "significant": self.significant,
        }


def run_batch(
    graph: ClassGraph,
    algorithm: str,
    runs: int,
    base_seed: int,
    reference: Partition,
) -> tuple[BatchStats, Partition]:
    """Run `runs` seeded detections (seeds base, base+1, ...) and aggregate.

    Returns the stats plus the best-Q run's partition. EB is deterministic
    and executes exactly once regardless of `runs`.
    """
    from . import detect  # local import to avoid a module cycle

    if runs < 1:
        raise GraphError("runs must be >= 1")
    stats = BatchStats(algorithm=algorithm)
    best_q = -math.inf
    best_partition: Partition | None = None
    if algorithm == "eb":
        seeds = [base_seed]
    elif algorithm in ("mo", "lp"):
        seeds = [base_seed + i for i in range(runs)]
    else:
        raise GraphError(f"unknown algorithm {algorithm!r}")
    for seed in seeds:
        if algorithm == "eb":
            partition, _ = detect.detect_eb(graph)
        elif algorithm == "mo":
            partition, _ = detect.detect_mo(graph, seed)
        else:
            partition = detect.detect_lp(graph, seed)
        q = modularity(graph, partition)
        stats.q_values.append(q)
        stats.nmi_values.append(nmi(partition, reference))
        if q > best_q:
            best_q = q
            best_partition = partition
    assert best_partition is not None
    return stats, best_partition
