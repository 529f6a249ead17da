"""Deterministic layered layout and DOT / structured-text export."""
from __future__ import annotations

import json
from typing import Dict, Mapping, Optional, Tuple

from .errors import LayoutError
from .graph import SIGN_GLYPHS, LabeledGraph
from .qcid import QcidModel

_SHAPES = {"decision": "box", "chance": "circle", "utility": "hexagon"}


def layout(m: QcidModel) -> Dict[str, Tuple[int, int]]:
    """Layered left-to-right coordinates: rank = longest path to the utility
    node (utility rightmost), within-layer order sorted by label."""
    g = m.graph
    utilities = m.vertices_of_kind("utility")
    sink = utilities[0] if len(utilities) == 1 else None

    # longest directed path to the sink; vertices that cannot reach it are
    # ranked by longest path to any sink-less end (rank 0 fallback)
    rank: Dict[str, int] = {}

    def longest(v: str, trail: frozenset) -> int:
        if v in rank:
            return rank[v]
        if v in trail:
            raise LayoutError(f"cycle through vertex {v!r}")
        best = 0
        for w in g.successors(v):
            best = max(best, 1 + longest(w, trail | {v}))
        rank[v] = best
        return best

    for v in sorted(g.vertices):
        longest(v, frozenset())
    if sink is not None and rank[sink] != 0:
        raise LayoutError("utility node has successors; cannot place it rightmost")

    max_rank = max(rank.values(), default=0)
    layers: Dict[int, list] = {}
    for v in sorted(g.vertices, key=lambda v: g.label(v).text):
        layers.setdefault(rank[v], []).append(v)

    coords: Dict[str, Tuple[int, int]] = {}
    for r, members in layers.items():
        for y, v in enumerate(members):
            coords[v] = (max_rank - r, y)
    return coords


def to_dot(m: QcidModel, coords: Optional[Mapping[str, Tuple[int, int]]] = None) -> str:
    """DOT document with the rectangle/circle/hexagon shape convention and
    "+", "-", "?" edge labels on signed arcs; byte-stable for equal inputs."""
    g = m.graph
    lines = ["digraph qcid {", "  rankdir=LR;"]
    for v in sorted(g.vertices, key=lambda v: (g.label(v).text, v)):
        label = g.label(v).text.replace('"', '\\"')
        attrs = [f'label="{label}"', f"shape={_SHAPES[m.kinds[v]]}"]
        if m.kinds[v] == "chance":
            if v in m.dark:
                attrs.append('style=filled fillcolor=gray25 fontcolor=white')
            else:
                attrs.append('style=filled fillcolor=gray90')
        if coords and v in coords:
            x, y = coords[v]
            attrs.append(f'pos="{x},{-y}!"')
        lines.append(f'  "{v}" [{" ".join(attrs)}];')
    for s, t, tag in sorted(g.edges):
        glyph = SIGN_GLYPHS.get(tag)
        suffix = f' [label="{glyph}"]' if glyph else ""
        lines.append(f'  "{s}" -> "{t}"{suffix};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_diagram_dict(m: QcidModel, coords: Optional[Mapping[str, Tuple[int, int]]] = None) -> dict:
    """Structured diagram document consumed by the UI and by `check`."""
    doc = m.to_json_dict()
    if coords is None:
        coords = layout(m)
    for node in doc["nodes"]:
        x, y = coords[node["id"]]
        node["x"] = x
        node["y"] = y
    return doc


def to_diagram_json(m: QcidModel, coords: Optional[Mapping[str, Tuple[int, int]]] = None) -> str:
    return json.dumps(to_diagram_dict(m, coords), indent=2, sort_keys=True)


def diagram_from_json(text: str) -> QcidModel:
    return QcidModel.from_json_dict(json.loads(text))
