"""JSON and DOT forms of a spectral graph, and JSON-safe report encoding.

Graph JSON::

    {"genus": 3, "vertices": 8, "vertex_order": [1, ..., 8],
     "edges": [{"id": 0, "kind": "l", "index": 1, "ends": [1, 2]}, ...],
     "faces": [[edge ids], ...]}

``vertex_order`` lists the vertices along the Hamiltonian cycle.  On import the
vertices are renumbered so that ``vertex_order[k]`` becomes ``k + 1``.
"""

from __future__ import annotations

import dataclasses
import json
from enum import Enum
from typing import Any

from .gf2 import BitMat2, BitVec2
from .spectral_graph import Edge, EdgeLabel, Kind, SpectralGraph


class SchemaError(ValueError):
    """The document is not a well-formed graph description."""


def graph_to_dict(graph: SpectralGraph) -> dict[str, Any]:
    return {
        "genus": graph.genus,
        "vertices": graph.vertex_count,
        "vertex_order": graph.vertex_order,
        "edges": [{"id": e.id, "kind": e.label.kind.value, "index": e.label.index,
                   "ends": list(e.ends)} for e in graph.edges],
        "faces": [list(f) for f in graph.faces],
    }


def graph_to_json(graph: SpectralGraph) -> str:
    return json.dumps(graph_to_dict(graph), indent=2) + "\n"


def _int(doc: dict, key: str) -> int:
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"field {key!r} must be an integer")
    return v


def graph_from_dict(doc: Any) -> SpectralGraph:
    """Parse a graph document; structural problems raise :class:`SchemaError`.

    Only the shape of the document is checked here.  Mathematical invariants
    are left to :func:`hitchmono.spectral_graph.validate`.
    """
    if not isinstance(doc, dict):
        raise SchemaError("graph document must be a JSON object")
    for key in ("genus", "vertices", "edges", "faces"):
        if key not in doc:
            raise SchemaError(f"missing field {key!r}")
    genus = _int(doc, "genus")
    nv = _int(doc, "vertices")
    if nv <= 0:
        raise SchemaError("vertex count must be positive")
    order = doc.get("vertex_order", list(range(1, nv + 1)))
    if sorted(order) != list(range(1, nv + 1)):
        raise SchemaError("vertex_order must be a permutation of 1..vertices")
    relabel = {old: new for new, old in enumerate(order, start=1)}

    raw = doc["edges"]
    if not isinstance(raw, list) or not raw:
        raise SchemaError("edges must be a non-empty list")
    edges = []
    for k, item in enumerate(raw):
        if not isinstance(item, dict):
            raise SchemaError(f"edge {k} must be an object")
        if _int(item, "id") != k:
            raise SchemaError(f"edge ids must be 0..{len(raw) - 1} in order (entry {k})")
        try:
            kind = Kind(item.get("kind"))
        except ValueError:
            raise SchemaError(f"edge {k}: kind must be 'l', 'u' or 'b'") from None
        ends = item.get("ends")
        if (not isinstance(ends, list) or len(ends) != 2
                or not all(isinstance(v, int) and 1 <= v <= nv for v in ends)):
            raise SchemaError(f"edge {k}: ends must be two vertex ids in 1..{nv}")
        a, b = relabel[ends[0]], relabel[ends[1]]
        edges.append(Edge(k, EdgeLabel(kind, _int(item, "index")), (min(a, b), max(a, b))))

    faces = doc["faces"]
    if not isinstance(faces, list) or not all(
            isinstance(f, list) and all(isinstance(e, int) and 0 <= e < len(edges) for e in f)
            for f in faces):
        raise SchemaError("faces must be lists of edge ids")
    return SpectralGraph(genus, nv, tuple(edges), tuple(tuple(f) for f in faces))


def graph_from_json(text: str) -> SpectralGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return graph_from_dict(doc)


def graph_to_dot(graph: SpectralGraph) -> str:
    """Undirected DOT; edges of the Hamiltonian cycle are drawn bold."""
    cycle = set(graph.e_prime)
    lines = [f"graph spectral_g{graph.genus} {{", "  node [shape=circle];"]
    for v in graph.vertex_order:
        lines.append(f"  {v};")
    for e in graph.edges:
        style = ", style=bold" if e.id in cycle else ", style=dashed"
        lines.append(f'  {e.ends[0]} -- {e.ends[1]} [label="{e.label}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_text(graph: SpectralGraph) -> str:
    lines = [f"genus {graph.genus}: {graph.vertex_count} vertices, {graph.n_edges} edges,"
             f" {len(graph.faces)} faces"]
    for e in graph.edges:
        lines.append(f"  {e.id:3d} {str(e.label):>4} {e.ends[0]}-{e.ends[1]}")
    for k, f in enumerate(graph.faces):
        lines.append(f"  face {k}: " + " ".join(str(graph.edges[e].label) for e in f))
    return "\n".join(lines) + "\n"


def to_jsonable(obj: Any) -> Any:
    """Plain JSON data; integers beyond 2**53 become decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 2 ** 53 else str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (BitVec2, EdgeLabel)):
        return str(obj)
    if isinstance(obj, BitMat2):
        return obj.to_strings()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_")}
    return str(obj)


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"
