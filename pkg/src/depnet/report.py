"""Assembly of the self-contained JSON analysis report.

Reports are deterministic for a fixed config and input: timestamps are only
emitted when SOURCE_DATE_EPOCH is set, and the input is identified by a
content digest instead of wall-clock provenance.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import os

from .detect import EB_DEFAULT_EDGE_CAP
from .errors import SizeCapError
from .graph import ClassGraph, Partition
from .ingest import package_partition
from .metrics import (
    modularity,
    nmi,
    run_batch,
    size_distribution,
    split_disconnected,
)

_DISTRIBUTION_SCHEMA = {
    "type": "object",
    "required": ["sizes", "ccdf", "alpha", "xmin"],
    "properties": {
        "sizes": {"type": "array", "items": {"type": "integer"}},
        "ccdf": {"type": "array",
                 "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        "alpha": {"type": ["number", "null"]},
        "xmin": {"type": "integer"},
    },
}

_BATCH_SCHEMA = {
    "type": "object",
    "required": ["algorithm", "runs", "q_values", "mean_q", "max_q",
                 "nmi_values", "peak_nmi", "significant"],
    "properties": {
        "algorithm": {"enum": ["eb", "mo", "lp"]},
        "runs": {"type": "integer", "minimum": 1},
        "q_values": {"type": "array", "items": {"type": "number"}},
        "mean_q": {"type": "number"},
        "max_q": {"type": "number"},
        "nmi_values": {"type": "array", "items": {"type": "number"}},
        "peak_nmi": {"type": "number"},
        "significant": {"type": "boolean"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["config", "network", "packages", "algorithms",
                 "size_distributions", "timestamp", "input_sha256"],
    "properties": {
        "config": {"type": "object"},
        "network": {
            "type": "object",
            "required": ["nodes", "edges", "packages"],
            "properties": {
                "nodes": {"type": "integer"},
                "edges": {"type": "integer"},
                "packages": {"type": "integer"},
            },
        },
        "packages": {
            "type": "object",
            "required": ["q", "q_plus", "blocks", "blocks_plus",
                         "disconnected_packages"],
            "properties": {
                "q": {"type": "number"},
                "q_plus": {"type": "number"},
                "blocks": {"type": "integer"},
                "blocks_plus": {"type": "integer"},
                "disconnected_packages": {"type": "array",
                                          "items": {"type": "string"}},
            },
        },
        "algorithms": {
            "type": "object",
            "additionalProperties": {
                "oneOf": [
                    _BATCH_SCHEMA,
                    {"type": "object", "required": ["skipped"],
                     "properties": {"skipped": {"type": "string"}}},
                ],
            },
        },
        "size_distributions": {
            "type": "object",
            "additionalProperties": _DISTRIBUTION_SCHEMA,
        },
        "timestamp": {"type": ["string", "null"]},
        "input_sha256": {"type": "string"},
    },
}


def _timestamp() -> str | None:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is None:
        return None
    moment = datetime.datetime.fromtimestamp(int(epoch), tz=datetime.timezone.utc)
    return moment.isoformat()


def build_report(
    graph: ClassGraph,
    config: dict,
    input_bytes: bytes,
    runs: int = 100,
    eb_runs: int = 10,
    seed: int = 42,
    xmin: int = 1,
    package_depth: int | None = None,
    algorithms: tuple[str, ...] = ("eb", "mo", "lp"),
) -> dict:
    """Run the full analysis (package metrics + all detectors) into one dict."""
    packages = package_partition(graph, package_depth)
    packages_plus = split_disconnected(graph, packages)
    disconnected = sorted(
        str(lbl) for lbl in packages.label_set()
        if str(lbl) not in {str(l) for l in packages_plus.label_set()}
    )

    algo_section: dict[str, dict] = {}
    distributions = {"packages": size_distribution(packages, xmin).to_dict()}
    for algo in algorithms:
        algo_runs = eb_runs if algo == "eb" else runs
        try:
            stats, best = run_batch(graph, algo, algo_runs, seed, packages)
        except SizeCapError as exc:
            algo_section[algo] = {"skipped": str(exc)}
            continue
        algo_section[algo] = stats.to_dict()
        distributions[f"communities_{algo}"] = \
            size_distribution(best, xmin).to_dict()

    return {
        "config": config,
        "network": {
            "nodes": graph.n_nodes,
            "edges": graph.m,
            "packages": packages.n_blocks,
        },
        "packages": {
            "q": modularity(graph, packages),
            "q_plus": modularity(graph, packages_plus),
            "blocks": packages.n_blocks,
            "blocks_plus": packages_plus.n_blocks,
            "disconnected_packages": disconnected,
        },
        "algorithms": algo_section,
        "size_distributions": distributions,
        "timestamp": _timestamp(),
        "input_sha256": hashlib.sha256(input_bytes).hexdigest(),
    }


def dump_report(report: dict) -> str:
    """Canonical JSON serialization (byte-stable for identical reports)."""
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
