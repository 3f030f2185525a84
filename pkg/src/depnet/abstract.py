"""Community-abstraction networks: one node per community, weighted
inter-community edges, and per-community package distributions, exportable
as DOT, GraphML or JSON (schema v1)."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .errors import FormatError, GraphError
from .graph import ClassGraph, Partition

EXPORT_FORMATS = ("dot", "graphml", "json")
WEAK_PACKAGE_SHARE = 0.05  # display-only threshold for "weakly represented"


@dataclass(frozen=True)
class Community:
    label: str
    size: int
    packages: dict[str, int]
    self_weight: int

    def top_package(self) -> str:
        if not self.packages:
            return ""
        return min(self.packages, key=lambda p: (-self.packages[p], p))


@dataclass(frozen=True)
class CommunityEdge:
    a: str
    b: str
    weight: int


@dataclass(frozen=True)
class CommunityGraph:
    communities: tuple[Community, ...]  # sorted by label
    edges: tuple[CommunityEdge, ...]    # sorted by (a, b), a < b

    @property
    def total_size(self) -> int:
        return sum(c.size for c in self.communities)

    def labels(self) -> list[str]:
        return [c.label for c in self.communities]


def community_network(
    graph: ClassGraph,
    partition: Partition,
    packages: Partition,
) -> CommunityGraph:
    """Collapse a partition into its community graph.

    Inter-community multigraph edges become weighted edges; intra-community
    edges are kept as each node's self-weight. Package distributions come
    from the second partition.
    """
    for part in (partition, packages):
        if not part.covers(graph):
            raise GraphError("partition does not cover the graph's node set")
    node_label = {u: str(partition.label_of(u)) for u in range(graph.n_nodes)}
    sizes: Counter = Counter(node_label.values())
    pkg_dist: dict[str, Counter] = {lbl: Counter() for lbl in sizes}
    for u in range(graph.n_nodes):
        pkg_dist[node_label[u]][str(packages.label_of(u))] += 1
    self_weight: Counter = Counter()
    cross: Counter = Counter()
    for u, v, _ in graph.edges:
        lu, lv = node_label[u], node_label[v]
        if lu == lv:
            self_weight[lu] += 1
        else:
            cross[tuple(sorted((lu, lv)))] += 1
    communities = tuple(
        Community(
            label=lbl,
            size=sizes[lbl],
            packages=dict(sorted(pkg_dist[lbl].items())),
            self_weight=self_weight[lbl],
        )
        for lbl in sorted(sizes)
    )
    edges = tuple(
        CommunityEdge(a, b, cross[(a, b)]) for a, b in sorted(cross)
    )
    assert sum(c.size for c in communities) == graph.n_nodes
    assert sum(e.weight for e in edges) + sum(c.self_weight for c in communities) == graph.m
    return CommunityGraph(communities, edges)


def largest_components_filter(cgraph: CommunityGraph, k: int) -> CommunityGraph:
    """Keep the k largest connected components by total class count."""
    if k < 1:
        raise GraphError("k must be >= 1")
    parent = {c.label: c.label for c in cgraph.communities}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for edge in cgraph.edges:
        ra, rb = find(edge.a), find(edge.b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[str, list[Community]] = {}
    for community in cgraph.communities:
        groups.setdefault(find(community.label), []).append(community)
    ranked = sorted(
        groups.values(),
        key=lambda cs: (-sum(c.size for c in cs), min(c.label for c in cs)),
    )
    keep = {c.label for group in ranked[:k] for c in group}
    communities = tuple(c for c in cgraph.communities if c.label in keep)
    edges = tuple(e for e in cgraph.edges if e.a in keep and e.b in keep)
    return CommunityGraph(communities, edges)


def export(cgraph: CommunityGraph, fmt: str) -> str:
    """Serialize a community graph; output is byte-stable for a fixed input."""
    if fmt == "dot":
        return _export_dot(cgraph)
    if fmt == "graphml":
        return _export_graphml(cgraph)
    if fmt == "json":
        return _export_json(cgraph)
    raise FormatError(f"unknown export format {fmt!r}")


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _export_dot(cgraph: CommunityGraph) -> str:
    max_weight = max((e.weight for e in cgraph.edges), default=1)
    lines = ["graph communities {", "  node [shape=ellipse];"]
    for c in cgraph.communities:
        width = round(0.5 + 0.3 * math.sqrt(c.size), 2)
        attrs = (
            f"label={_dot_quote(f'{c.label} ({c.size})')}, width={width}, "
            f"top_package={_dot_quote(c.top_package())}, self_weight={c.self_weight}"
        )
        lines.append(f"  {_dot_quote(c.label)} [{attrs}];")
    for e in cgraph.edges:
        penwidth = round(1.0 + 6.0 * e.weight / max_weight, 2)
        lines.append(
            f"  {_dot_quote(e.a)} -- {_dot_quote(e.b)} "
            f"[weight={e.weight}, penwidth={penwidth}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _export_graphml(cgraph: CommunityGraph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="size" for="node" attr.name="size" attr.type="int"/>',
        '  <key id="self_weight" for="node" attr.name="self_weight" attr.type="int"/>',
        '  <key id="packages" for="node" attr.name="packages" attr.type="string"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        '  <graph edgedefault="undirected">',
    ]
    for c in cgraph.communities:
        packages = json.dumps(c.packages, sort_keys=True)
        lines += [
            f"    <node id={quoteattr(c.label)}>",
            f'      <data key="size">{c.size}</data>',
            f'      <data key="self_weight">{c.self_weight}</data>',
            f'      <data key="packages">{escape(packages)}</data>',
            "    </node>",
        ]
    for e in cgraph.edges:
        lines += [
            f"    <edge source={quoteattr(e.a)} target={quoteattr(e.b)}>",
            f'      <data key="weight">{e.weight}</data>',
            "    </edge>",
        ]
    lines += ["  </graph>", "</graphml>"]
    return "\n".join(lines) + "\n"


def _export_json(cgraph: CommunityGraph) -> str:
    doc = {
        "version": 1,
        "communities": [
            {
                "label": c.label,
                "size": c.size,
                "packages": c.packages,
                "self_weight": c.self_weight,
            }
            for c in cgraph.communities
        ],
        "edges": [
            {"a": e.a, "b": e.b, "weight": e.weight} for e in cgraph.edges
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def community_graph_from_json(text: str) -> CommunityGraph:
    """Inverse of the JSON export; round-trips to an identical CommunityGraph."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid community-graph JSON: {exc}") from None
    if doc.get("version") != 1:
        raise FormatError(f"unsupported community-graph version {doc.get('version')!r}")
    communities = tuple(
        Community(
            label=c["label"],
            size=c["size"],
            packages=dict(c["packages"]),
            self_weight=c["self_weight"],
        )
        for c in sorted(doc["communities"], key=lambda c: c["label"])
    )
    edges = tuple(
        CommunityEdge(e["a"], e["b"], e["weight"])
        for e in sorted(doc["edges"], key=lambda e: (e["a"], e["b"]))
    )
    return CommunityGraph(communities, edges)
