"""Labeled directed graphs and the structural relations built on them.

Vertices carry exactly one symbol label; edges are (source, target, label)
triples forming a set, so parallel edges with distinct labels are allowed
while exact duplicates are rejected.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

from .errors import DuplicateEdgeError, UnknownVertexError

# Edge label tags used by the QCID notation.
PLUS = "plus"
MINUS = "minus"
UNKNOWN = "unknown"
INFO = "info"
PLAIN = "plain"

QCID_EDGE_LABELS = frozenset({PLUS, MINUS, UNKNOWN, INFO, PLAIN})
SIGN_LABELS = frozenset({PLUS, MINUS, UNKNOWN})
SIGN_GLYPHS = {PLUS: "+", MINUS: "-", UNKNOWN: "?"}

Edge = Tuple[str, str, str]


@dataclass(frozen=True, order=True)
class Symbol:
    """A vertex label; nonterminals are written in angle brackets, e.g. ``<test>``."""

    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("symbol text must be nonempty")
        if self.text.startswith("<") != self.text.endswith(">"):
            raise ValueError(f"unbalanced angle brackets in symbol {self.text!r}")
        if self.text.startswith("<") and len(self.text) <= 2:
            raise ValueError("nonterminal symbol needs a nonempty class name")

    @property
    def is_nonterminal(self) -> bool:
        return self.text.startswith("<")

    @property
    def is_terminal(self) -> bool:
        return not self.is_nonterminal

    def __str__(self) -> str:
        return self.text


class LabeledGraph:
    """Directed graph with symbol-labeled vertices and labeled edges.

    Instances are treated as snapshots: rewriting builds new graphs rather
    than mutating shared ones. The mutating methods exist for single-writer
    builder use only.
    """

    def __init__(self, labels: Optional[Mapping[str, Symbol]] = None,
                 edges: Optional[Iterable[Edge]] = None):
        self._labels: Dict[str, Symbol] = dict(labels or {})
        self._edges: Set[Edge] = set()
        for e in edges or ():
            self.add_edge(*e)

    # -- construction ----------------------------------------------------

    def add_vertex(self, vertex_id: str, label: Symbol) -> None:
        if vertex_id in self._labels:
            raise ValueError(f"vertex {vertex_id!r} already present")
        self._labels[vertex_id] = label

    def add_edge(self, source: str, target: str, label: str) -> None:
        for v in (source, target):
            if v not in self._labels:
                raise UnknownVertexError(v)
        edge = (source, target, label)
        if edge in self._edges:
            raise DuplicateEdgeError(edge)
        self._edges.add(edge)

    def copy(self) -> "LabeledGraph":
        g = LabeledGraph()
        g._labels = dict(self._labels)
        g._edges = set(self._edges)
        return g

    # -- inspection ------------------------------------------------------

    @property
    def vertices(self) -> FrozenSet[str]:
        return frozenset(self._labels)

    @property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(self._edges)

    def label(self, vertex_id: str) -> Symbol:
        try:
            return self._labels[vertex_id]
        except KeyError:
            raise UnknownVertexError(vertex_id) from None

    def labeling(self) -> Dict[str, Symbol]:
        return dict(self._labels)

    def __contains__(self, vertex_id: str) -> bool:
        return vertex_id in self._labels

    def __len__(self) -> int:
        return len(self._labels)

    def has_edge(self, source: str, target: str, label: str) -> bool:
        return (source, target, label) in self._edges

    def out_edges(self, vertex_id: str) -> List[Edge]:
        return sorted(e for e in self._edges if e[0] == vertex_id)

    def in_edges(self, vertex_id: str) -> List[Edge]:
        return sorted(e for e in self._edges if e[1] == vertex_id)

    def incident_edges(self, vertex_id: str) -> List[Edge]:
        return sorted(e for e in self._edges if vertex_id in e[:2])

    def successors(self, vertex_id: str) -> Set[str]:
        return {t for s, t, _ in self._edges if s == vertex_id}

    def predecessors(self, vertex_id: str) -> Set[str]:
        return {s for s, t, _ in self._edges if t == vertex_id}

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._labels == other._labels and self._edges == other._edges

    def __repr__(self) -> str:
        return f"LabeledGraph({len(self._labels)} vertices, {len(self._edges)} edges)"

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "label": self._labels[v].text}
                         for v in sorted(self._labels)],
            "edges": [{"from": s, "to": t, "label": m}
                      for s, t, m in sorted(self._edges)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "LabeledGraph":
        g = cls()
        for entry in doc.get("vertices", []):
            g.add_vertex(entry["id"], Symbol(entry["label"]))
        for entry in doc.get("edges", []):
            g.add_edge(entry["from"], entry["to"], entry["label"])
        return g

    @classmethod
    def from_json(cls, text: str) -> "LabeledGraph":
        return cls.from_json_dict(json.loads(text))


def span(vertex_subset: Iterable[str], g: LabeledGraph) -> LabeledGraph:
    """Subgraph spanned by ``vertex_subset``: those vertices plus every edge
    of ``g`` with both endpoints inside the subset."""
    subset = set(vertex_subset)
    for v in subset:
        if v not in g:
            raise UnknownVertexError(v)
    labels = {v: g.label(v) for v in subset}
    edges = {e for e in g.edges if e[0] in subset and e[1] in subset}
    return LabeledGraph(labels, edges)


def _undirected_neighbors(g: LabeledGraph, v: str) -> Set[str]:
    return g.successors(v) | g.predecessors(v)


def chain_exists(v0: str, vn: str, g: LabeledGraph) -> bool:
    """True iff an edge sequence joins ``v0`` and ``vn`` ignoring direction.

    Reflexively true for ``v0 == vn``.
    """
    for v in (v0, vn):
        if v not in g:
            raise UnknownVertexError(v)
    if v0 == vn:
        return True
    seen = {v0}
    queue = deque([v0])
    while queue:
        v = queue.popleft()
        for w in _undirected_neighbors(g, v):
            if w == vn:
                return True
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return False


def connected_components(restriction: Iterable[str], g: LabeledGraph) -> List[FrozenSet[str]]:
    """Partition ``restriction`` into chain-connectivity classes.

    Chains may pass only through vertices of the restriction set itself, so
    two restricted vertices bridged solely by an excluded vertex land in
    different classes. Classes are returned sorted by their smallest member.
    """
    subset = set(restriction)
    for v in subset:
        if v not in g:
            raise UnknownVertexError(v)
    remaining = set(subset)
    classes: List[FrozenSet[str]] = []
    while remaining:
        root = min(remaining)
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in _undirected_neighbors(g, v):
                if w in subset and w not in seen:
                    seen.add(w)
                    queue.append(w)
        classes.append(frozenset(seen))
        remaining -= seen
    return sorted(classes, key=min)


def isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """True iff a label- and edge-label-preserving vertex bijection exists."""
    if len(g1) != len(g2) or len(g1.edges) != len(g2.edges):
        return False
    if sorted(s.text for s in g1.labeling().values()) != \
       sorted(s.text for s in g2.labeling().values()):
        return False

    def signature(g: LabeledGraph, v: str):
        outs = sorted((m, g.label(t).text) for s, t, m in g.edges if s == v)
        ins = sorted((m, g.label(s).text) for s, t, m in g.edges if t == v)
        return (g.label(v).text, tuple(outs), tuple(ins))

    sig1 = {v: signature(g1, v) for v in g1.vertices}
    sig2 = {v: signature(g2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return False

    order = sorted(g1.vertices, key=lambda v: (sig1[v], v))
    mapping: Dict[str, str] = {}
    used: Set[str] = set()

    edge_labels = {e[2] for e in g1.edges} | {e[2] for e in g2.edges}

    def edges_consistent(v1: str, v2: str) -> bool:
        for m in edge_labels:
            if g1.has_edge(v1, v1, m) != g2.has_edge(v2, v2, m):
                return False
        for u1, u2 in mapping.items():
            for m in edge_labels:
                if g1.has_edge(v1, u1, m) != g2.has_edge(v2, u2, m):
                    return False
                if g1.has_edge(u1, v1, m) != g2.has_edge(u2, v2, m):
                    return False
        return True

    def backtrack(i: int) -> bool:
        if i == len(order):
            return True
        v1 = order[i]
        for v2 in sorted(g2.vertices):
            if v2 in used or sig2[v2] != sig1[v1]:
                continue
            if not edges_consistent(v1, v2):
                continue
            mapping[v1] = v2
            used.add(v2)
            if backtrack(i + 1):
                return True
            del mapping[v1]
            used.remove(v2)
        return False

    return backtrack(0)
