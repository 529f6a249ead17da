"""Four-region production rules and whole grammars."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import GrammarError
from .graph import Edge, LabeledGraph, QCID_EDGE_LABELS, Symbol
from .taxonomy import Taxonomy, VariantSpec

LEFT = "left"
ABOVE = "above"
BELOW = "below"
RIGHT = "right"
REGIONS = (LEFT, ABOVE, BELOW, RIGHT)


@dataclass(frozen=True)
class ProductionVertex:
    id: str
    label: Symbol
    region: str
    variant: Optional[VariantSpec] = None

    def __post_init__(self):
        if self.region not in REGIONS:
            raise GrammarError(f"bad region {self.region!r} for vertex {self.id!r}")


class Production:
    """A rewrite rule: vertices partitioned into the left (deleted), right
    (inserted), above (indeterminate embedding) and below (determinate
    embedding) regions, plus the rule's edges.

    Edges between left and right, or between above and below, are forbidden.
    """

    def __init__(self, name: str, vertices: Iterable[ProductionVertex],
                 edges: Iterable[Edge] = ()):
        if not name:
            raise GrammarError("production name must be nonempty")
        self.name = name
        self.vertices: Dict[str, ProductionVertex] = {}
        for v in vertices:
            if v.id in self.vertices:
                raise GrammarError(f"production {name!r}: duplicate vertex id {v.id!r}")
            self.vertices[v.id] = v
        self.edges: FrozenSet[Edge] = frozenset(edges)
        self._validate()

    def _validate(self) -> None:
        for s, t, m in self.edges:
            for v in (s, t):
                if v not in self.vertices:
                    raise GrammarError(
                        f"production {self.name!r}: edge references unknown vertex {v!r}")
            rs, rt = self.vertices[s].region, self.vertices[t].region
            if {rs, rt} == {LEFT, RIGHT}:
                raise GrammarError(
                    f"production {self.name!r}: edge {s!r}->{t!r} between left "
                    f"and right regions is forbidden")
            if {rs, rt} == {ABOVE, BELOW}:
                raise GrammarError(
                    f"production {self.name!r}: edge {s!r}->{t!r} between above "
                    f"and below regions is forbidden")
        for v in self.vertices.values():
            if v.variant is not None and v.region != RIGHT:
                raise GrammarError(
                    f"production {self.name!r}: variant annotation on "
                    f"non-right vertex {v.id!r}")

    # -- region accessors ------------------------------------------------

    def region(self, region: str) -> FrozenSet[str]:
        return frozenset(v.id for v in self.vertices.values() if v.region == region)

    @property
    def v_left(self) -> FrozenSet[str]:
        return self.region(LEFT)

    @property
    def v_above(self) -> FrozenSet[str]:
        return self.region(ABOVE)

    @property
    def v_below(self) -> FrozenSet[str]:
        return self.region(BELOW)

    @property
    def v_right(self) -> FrozenSet[str]:
        return self.region(RIGHT)

    @property
    def embedding(self) -> FrozenSet[str]:
        return self.v_above | self.v_below

    def regions(self) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str], FrozenSet[str]]:
        return (self.v_left, self.v_above, self.v_below, self.v_right)

    def label_of(self, vertex_id: str) -> Symbol:
        return self.vertices[vertex_id].label

    def variant_spec(self, vertex_id: str, taxonomy: Taxonomy) -> Optional[VariantSpec]:
        """Variant recipe for a right-region vertex, if any.

        An inline annotation on the production wins; otherwise a nonterminal
        label whose taxonomy class carries a variant marker counts.
        """
        v = self.vertices[vertex_id]
        if v.variant is not None:
            return v.variant
        if v.label.is_nonterminal and taxonomy.has_class(v.label.text):
            return taxonomy.get_class(v.label.text).variant
        return None

    def right_partition(self, taxonomy: Taxonomy) -> Tuple[List[str], List[str]]:
        """Split V_R into (new, variant) vertex ids, each sorted."""
        new, var = [], []
        for vid in sorted(self.v_right):
            (var if self.variant_spec(vid, taxonomy) else new).append(vid)
        return new, var

    def as_graph(self) -> LabeledGraph:
        """The production's own vertices/edges as a labeled graph."""
        return LabeledGraph({v.id: v.label for v in self.vertices.values()}, self.edges)

    def nonterminal_count(self) -> int:
        return sum(1 for v in self.vertices.values() if v.label.is_nonterminal)

    def to_json_dict(self) -> dict:
        vertices = []
        for vid in sorted(self.vertices):
            v = self.vertices[vid]
            entry: dict = {"id": v.id, "label": v.label.text, "region": v.region}
            if v.variant:
                entry["variant"] = v.variant.to_json_dict()
            vertices.append(entry)
        return {
            "name": self.name,
            "vertices": vertices,
            "edges": [{"from": s, "to": t, "label": m} for s, t, m in sorted(self.edges)],
        }


def string_abbreviation(lhs: Symbol, rhs: Sequence[Symbol], name: Optional[str] = None) -> Production:
    """Expand a string-grammar abbreviation: replace one ``lhs`` node by
    ``rhs`` nodes, with empty embedding regions and no embedding edges."""
    vertices = [ProductionVertex("l0", lhs, LEFT)]
    vertices += [ProductionVertex(f"r{i}", sym, RIGHT) for i, sym in enumerate(rhs)]
    return Production(name or f"rewrite-{lhs.text}", vertices)


class Grammar:
    """Ordered productions plus the edge-label alphabet and initial graph."""

    def __init__(self, productions: Sequence[Production],
                 edge_labels: Iterable[str], initial_graph: LabeledGraph):
        self.productions: List[Production] = list(productions)
        self.edge_labels: FrozenSet[str] = frozenset(edge_labels)
        self.initial_graph = initial_graph
        names = [p.name for p in self.productions]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise GrammarError(f"duplicate production names: {dupes}")
        for p in self.productions:
            for s, t, m in p.edges:
                if m not in self.edge_labels:
                    raise GrammarError(
                        f"production {p.name!r}: edge label {m!r} not in alphabet")
        for s, t, m in initial_graph.edges:
            if m not in self.edge_labels:
                raise GrammarError(f"initial graph: edge label {m!r} not in alphabet")

    def production(self, name: str) -> Production:
        for p in self.productions:
            if p.name == name:
                return p
        raise GrammarError(f"no production named {name!r}")

    def to_json_dict(self) -> dict:
        return {
            "edge_labels": sorted(self.edge_labels),
            "initial_graph": self.initial_graph.to_json_dict(),
            "productions": [p.to_json_dict() for p in self.productions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def parse_grammar(text: str) -> Grammar:
    """Parse and validate a grammar document (JSON)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GrammarError(f"grammar parse error: {exc}") from exc
    return grammar_from_json_dict(doc)


def grammar_from_json_dict(doc: Mapping) -> Grammar:
    productions = []
    for pdoc in doc.get("productions", []):
        try:
            vertices = [
                ProductionVertex(
                    id=v["id"], label=Symbol(v["label"]), region=v["region"],
                    variant=VariantSpec.from_json_dict(v["variant"])
                    if v.get("variant") else None)
                for v in pdoc.get("vertices", [])
            ]
            edges = [(e["from"], e["to"], e["label"]) for e in pdoc.get("edges", [])]
        except (KeyError, ValueError) as exc:
            raise GrammarError(f"bad production entry {pdoc.get('name')!r}: {exc}") from exc
        productions.append(Production(pdoc["name"], vertices, edges))
    initial = LabeledGraph.from_json_dict(doc.get("initial_graph", {}))
    edge_labels = doc.get("edge_labels", sorted(QCID_EDGE_LABELS))
    return Grammar(productions, edge_labels, initial)
