"""JSON and DOT output.

Words use the text syntax of :mod:`outerspine.free_words` (``"abA"``).
Graphs are ``{"halfEdges": [...], "pairs": [[e, ebar], ...], "vertexOf":
{"<id>": vertex}}``; marked graphs add ``"basepoint"`` and ``"petals"`` (one
half-edge list per generator).  Roses are ``{"n": 2, "phi": ["ab", "b"]}``.
Ideal edges are the sorted half-edge list of the side holding half-edge 0.
"""
from __future__ import annotations

import json
from typing import Any, Iterable

from .free_words import format_word, parse_word
from .graphs import Graph
from .marked_graphs import MarkedGraph, Rose

WORD_SYNTAX = ("letters a..z are x_1..x_26, upper case letters are their inverses; "
               "'1' or the empty string is the identity")

SCHEMAS: dict[str, dict] = {
    "rose": {
        "type": "object",
        "required": ["n", "phi"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "phi": {"type": "array", "items": {"type": "string", "description": WORD_SYNTAX}},
        },
    },
    "graph": {
        "type": "object",
        "required": ["halfEdges", "pairs", "vertexOf"],
        "properties": {
            "halfEdges": {"type": "array", "items": {"type": "integer"}},
            "pairs": {"type": "array",
                      "items": {"type": "array", "items": {"type": "integer"},
                                "minItems": 2, "maxItems": 2}},
            "vertexOf": {"type": "object", "additionalProperties": {}},
        },
    },
    "markedGraph": {
        "type": "object",
        "required": ["graph", "basepoint", "petals"],
        "properties": {
            "graph": {"$ref": "#/graph"},
            "basepoint": {},
            "petals": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        },
    },
    "idealEdge": {"type": "array", "items": {"type": "integer"},
                  "description": "sorted half-edges of the side containing half-edge 0"},
}


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


def _unplain(v):
    if isinstance(v, list):
        return tuple(_unplain(x) for x in v)
    return v


def graph_to_json(g: Graph) -> dict:
    return {
        "halfEdges": g.half_edges,
        "pairs": [[e, g.inv[e]] for e in g.edges],
        "vertexOf": {str(h): _plain(g.origin[h]) for h in g.half_edges},
    }


def graph_from_json(d: dict) -> Graph:
    try:
        inv = {}
        for a, b in d["pairs"]:
            inv[int(a)], inv[int(b)] = int(b), int(a)
        origin = {int(h): _unplain(v) for h, v in d["vertexOf"].items()}
        if set(map(int, d["halfEdges"])) != set(inv) or set(origin) != set(inv):
            raise ValueError("halfEdges, pairs and vertexOf disagree")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph JSON: {exc}") from exc
    return Graph(inv, origin)


def rose_to_json(r: Rose) -> dict:
    return {"n": r.n, "phi": r.text()}


def rose_from_json(d: dict | str) -> Rose:
    if isinstance(d, str):
        d = json.loads(d)
    try:
        n = int(d["n"])
        words = [parse_word(w, n) for w in d["phi"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed rose JSON: {exc}") from exc
    if len(words) != n:
        raise ValueError(f"rose JSON has {len(words)} images for n={n}")
    return Rose(tuple(words))


def marked_graph_to_json(m: MarkedGraph) -> dict:
    return {"graph": graph_to_json(m.graph), "basepoint": _plain(m.basepoint),
            "petals": [list(p) for p in m.petals]}


def marked_graph_from_json(d: dict) -> MarkedGraph:
    return MarkedGraph(graph_from_json(d["graph"]), _unplain(d["basepoint"]),
                       tuple(tuple(int(h) for h in p) for p in d["petals"]))


def kn_path_to_json(p) -> dict:
    return {
        "points": [marked_graph_to_json(m) for m in p.points],
        "steps": [{"direction": d, "forest": sorted(f)} for d, f in p.steps],
        "moves": [{"kind": mv.kind, "data": list(mv.data)} for mv in p.moves],
        "edgeCounts": list(p.edge_counts),
    }


def dumps(obj: Any) -> str:
    """Stable JSON text: sorted keys, two-space indent, newline at the end."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- DOT -----------------------------------------------------------------------

def _vname(v) -> str:
    return '"' + str(_plain(v)).replace('"', "'") + '"'


def graph_to_dot(g: Graph, name: str = "G", petal_labels: dict | None = None,
                 subgraph: bool = False, highlight: Iterable[int] = ()) -> str:
    hi = set(highlight)
    kind = "subgraph cluster_" + name if subgraph else "digraph " + name
    lines = [f"{kind} {{"]
    if subgraph:
        lines.append(f'  label="{name}";')
    prefix = name + ":" if subgraph else ""
    for v in g.vertices:
        lines.append(f'  "{prefix}{_plain(v)}" [label="{_plain(v)}"];')
    for e in g.edges:
        a, b = g.endpoints(e)
        label = petal_labels.get(e, str(e)) if petal_labels else str(e)
        style = ", color=red, penwidth=2" if e in hi else ""
        lines.append(f'  "{prefix}{_plain(a)}" -> "{prefix}{_plain(b)}" [label="{label}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def kn_path_to_dot(p) -> str:
    out = ["digraph KnPath {", "  compound=true;"]
    for i, m in enumerate(p.points):
        forest = ()
        if i < len(p.steps) and p.steps[i][0] == "collapse":
            forest = p.steps[i][1]
        if i > 0 and p.steps[i - 1][0] == "blowup":
            forest = p.steps[i - 1][1]
        body = graph_to_dot(m.graph, f"p{i}", subgraph=True, highlight=forest)
        out.extend("  " + line for line in body.rstrip("\n").split("\n"))
    out.append("}")
    return "\n".join(out) + "\n"


def star_graph_to_dot(sg) -> str:
    from .whitehead import half_edge_name

    lines = ["graph StarGraph {", f'  label="{sg.cls}";']
    for h in sg.vertices:
        lines.append(f'  {h} [label="{half_edge_name(h)}"];')
    for a, b in sg.edges:
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def word_text(w) -> str:
    return format_word(tuple(w))
