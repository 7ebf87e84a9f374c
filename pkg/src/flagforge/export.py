"""Serialization of flag graphs and reports.

Vertex ids are 1-based positions in the sorted flag list; points are printed
1-based as well.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .flagcalc import FlagGraph

GRAPH6_MAX_VERTICES = 62_000
SCHEMA = 1


class ExportFormatError(ValueError):
    pass


def flag_label(flag) -> list:
    sigma, line = flag
    return [int(sigma) + 1, [int(x) + 1 for x in line]]


def edge_list(graph: FlagGraph) -> str:
    e = graph.edges() + 1
    order = np.lexsort((e[:, 1], e[:, 0]))
    e = e[order]
    return "".join(f"{a} {b}\n" for a, b in e.tolist())


def vertex_table(graph: FlagGraph) -> str:
    rows = ["# id sigma coline"]
    for i, (s, line) in enumerate(graph.vertices, start=1):
        rows.append(f"{i} {s + 1} " + ",".join(str(x + 1) for x in line))
    return "\n".join(rows) + "\n"


def _graph6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    return bytes([126, 126] + [63 + (n >> s & 63) for s in (30, 24, 18, 12, 6, 0)])


def graph6_encode(n: int, edges: np.ndarray) -> bytes:
    """graph6 bytes (no trailing newline) for an undirected simple graph."""
    if n > GRAPH6_MAX_VERTICES:
        raise ExportFormatError(f"graph6 export limited to {GRAPH6_MAX_VERTICES} vertices")
    total = n * (n - 1) // 2
    bits = np.zeros(total + (-total) % 6, dtype=np.uint8)
    if len(edges):
        a = np.minimum(edges[:, 0], edges[:, 1]).astype(np.int64)
        b = np.maximum(edges[:, 0], edges[:, 1]).astype(np.int64)
        bits[b * (b - 1) // 2 + a] = 1
    weights = np.array([32, 16, 8, 4, 2, 1], dtype=np.uint8)
    body = (bits.reshape(-1, 6) * weights).sum(axis=1).astype(np.uint8) + 63
    return _graph6_size(n) + body.tobytes()


def graph6(graph: FlagGraph) -> bytes:
    return graph6_encode(graph.order, graph.edges()) + b"\n"


def _plain(obj):
    if dataclasses.is_dataclass(obj):
        return {k: _plain(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def report_json(report: dict) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"
