"""QCID semantics over derived graphs and the structural-property checker.

A qualitative contingent influence diagram assigns each node a kind
(decision, chance, utility), signs its probabilistic arcs, and is expected
to satisfy a fixed list of structural properties (acyclicity, a unique
utility sink, chance-to-utility paths free of decisions, ...).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

from .errors import TaxonomyError, QcidgenError
from .graph import INFO, LabeledGraph, SIGN_LABELS, Symbol
from .taxonomy import Taxonomy

PASS = "pass"
FAIL = "fail"
PROXY_PASS = "proxy-pass"
PROXY_FAIL = "proxy-fail"
NOT_APPLICABLE = "n/a"


@dataclass
class QcidModel:
    graph: LabeledGraph
    kinds: Dict[str, str]                       # vertex -> decision|chance|utility
    contingency: Dict[str, dict] = field(default_factory=dict)
    dark: FrozenSet[str] = frozenset()          # rendering hint (disease shading)

    def vertices_of_kind(self, kind: str) -> List[str]:
        return sorted(v for v, k in self.kinds.items() if k == kind)

    def to_json_dict(self) -> dict:
        g = self.graph
        nodes = []
        for v in sorted(g.vertices):
            entry = {"id": v, "label": g.label(v).text, "kind": self.kinds[v]}
            if v in self.contingency:
                entry["contingency"] = self.contingency[v]
            if v in self.dark:
                entry["dark"] = True
            nodes.append(entry)
        edges = [{"from": s, "to": t, "sign": m} for s, t, m in sorted(g.edges)]
        return {"nodes": nodes, "edges": edges}

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "QcidModel":
        g = LabeledGraph()
        kinds: Dict[str, str] = {}
        contingency: Dict[str, dict] = {}
        dark: Set[str] = set()
        for entry in doc.get("nodes", []):
            g.add_vertex(entry["id"], Symbol(entry["label"]))
            kinds[entry["id"]] = entry["kind"]
            if entry.get("contingency"):
                contingency[entry["id"]] = entry["contingency"]
            if entry.get("dark"):
                dark.add(entry["id"])
        for entry in doc.get("edges", []):
            g.add_edge(entry["from"], entry["to"], entry["sign"])
        return cls(g, kinds, contingency, frozenset(dark))


def classify_model(g: LabeledGraph, taxonomy: Taxonomy,
                   contingency: Optional[Mapping[str, dict]] = None) -> QcidModel:
    """Assign node kinds from the taxonomy; error on any kindless label."""
    kinds: Dict[str, str] = {}
    dark: Set[str] = set()
    for v in sorted(g.vertices):
        label = g.label(v)
        try:
            kinds[v] = taxonomy.kind_of(label)
        except TaxonomyError as exc:
            raise TaxonomyError(f"vertex {v!r} ({label.text!r}): {exc}") from exc
        for name in taxonomy.classes_of(label):
            for a in taxonomy.ancestors_or_self(name):
                if a.shade == "dark":
                    dark.add(v)
                    break
    return QcidModel(g, kinds, dict(contingency or {}), frozenset(dark))


@dataclass
class PropertyResult:
    number: int
    description: str
    status: str
    witness: Optional[object] = None

    @property
    def ok(self) -> bool:
        return self.status in (PASS, PROXY_PASS, NOT_APPLICABLE)

    def to_json_dict(self) -> dict:
        return {"number": self.number, "description": self.description,
                "status": self.status, "witness": self.witness}


@dataclass
class PropertyReport:
    results: List[PropertyResult]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.results)

    def result(self, number: int) -> PropertyResult:
        for r in self.results:
            if r.number == number:
                return r
        raise KeyError(number)

    def to_json_dict(self) -> dict:
        return {"properties": [r.to_json_dict() for r in self.results]}

    def to_table(self) -> str:
        lines = [f"{'#':>2}  {'status':<11} description / witness"]
        for r in self.results:
            line = f"{r.number:>2}  {r.status:<11} {r.description}"
            if r.witness is not None:
                line += f"  [witness: {r.witness}]"
            lines.append(line)
        return "\n".join(lines)


def _find_cycle(g: LabeledGraph) -> Optional[List[str]]:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in g.vertices}
    stack: List[str] = []

    def visit(v: str) -> Optional[List[str]]:
        color[v] = GRAY
        stack.append(v)
        for w in sorted(g.successors(v)):
            if color[w] == GRAY:
                return stack[stack.index(w):] + [w]
            if color[w] == WHITE:
                cyc = visit(w)
                if cyc:
                    return cyc
        stack.pop()
        color[v] = BLACK
        return None

    for v in sorted(g.vertices):
        if color[v] == WHITE:
            cyc = visit(v)
            if cyc:
                return cyc
    return None


def _reaches(g: LabeledGraph, start: str, goal: str,
             blocked_kinds: Set[str] = frozenset(), kinds: Mapping[str, str] = ()) -> bool:
    """Directed path from start to goal whose intermediate vertices avoid
    the blocked kinds (start and goal are exempt)."""
    if start == goal:
        return True
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in g.successors(v):
            if w == goal:
                return True
            if w in seen:
                continue
            if blocked_kinds and kinds[w] in blocked_kinds:
                continue
            seen.add(w)
            frontier.append(w)
    return False


def check_properties(m: QcidModel) -> PropertyReport:
    """Evaluate the structural property suite; failures are report entries.

    Property 2 (no qualitatively dominated decisions) is a documented
    structural PROXY; property 3 (unambiguity) is a grammar-level property
    and reported as not applicable to a single model.
    """
    g = m.graph
    results: List[PropertyResult] = []

    cycle = _find_cycle(g)
    results.append(PropertyResult(
        1, "the directed graph is acyclic",
        PASS if cycle is None else FAIL, cycle))

    utilities = m.vertices_of_kind("utility")
    utility = utilities[0] if len(utilities) == 1 else None

    # 2 (PROXY): every decision reaches the utility node through chance
    # nodes only, and either its downstream cone originates a sign-bearing
    # arc or the decision takes part in an informational arc (its value is
    # the information it gathers)
    proxy_witness = None
    proxy_ok = utility is not None
    if utility is not None:
        signed_sources = {s for s, t, lab in g.edges if lab in SIGN_LABELS}
        informed = {v for s, t, lab in g.edges if lab == INFO for v in (s, t)}
        for d in m.vertices_of_kind("decision"):
            if not _reaches(g, d, utility, {"decision"}, m.kinds):
                proxy_ok, proxy_witness = False, d
                break
            reachable = {d}
            frontier = [d]
            while frontier:
                v = frontier.pop()
                for w in g.successors(v):
                    if w not in reachable:
                        reachable.add(w)
                        frontier.append(w)
            if not (reachable & signed_sources) and d not in informed:
                proxy_ok, proxy_witness = False, d
                break
    results.append(PropertyResult(
        2, "no qualitatively dominated decision nodes (PROXY)",
        PROXY_PASS if proxy_ok else PROXY_FAIL, proxy_witness))

    results.append(PropertyResult(
        3, "at most one derivation per input (grammar-level)",
        NOT_APPLICABLE))

    results.append(PropertyResult(
        4, "exactly one overall utility node",
        PASS if len(utilities) == 1 else FAIL,
        utilities if len(utilities) != 1 else None))

    if utility is not None:
        successors = sorted(g.successors(utility))
        results.append(PropertyResult(
            5, "no successors to the utility node",
            PASS if not successors else FAIL, successors or None))
        pathless = [v for v in sorted(g.vertices)
                    if not _reaches(g, v, utility)]
        results.append(PropertyResult(
            6, "all nodes have a directed path to the utility node",
            PASS if not pathless else FAIL, pathless or None))
        blocked = [v for v in m.vertices_of_kind("chance")
                   if not _reaches(g, v, utility, {"decision"}, m.kinds)]
        results.append(PropertyResult(
            7, "chance nodes reach the utility node with no intervening decisions",
            PASS if not blocked else FAIL, blocked or None))
    else:
        for num, desc in ((5, "no successors to the utility node"),
                          (6, "all nodes have a directed path to the utility node"),
                          (7, "chance nodes reach the utility node with no "
                              "intervening decisions")):
            results.append(PropertyResult(num, desc, FAIL, "no unique utility node"))

    # notation sanity: contingency groups must use distinct condition labels
    groups: Dict[str, List[str]] = {}
    for v, tag in m.contingency.items():
        groups.setdefault(str(tag.get("group")), []).append(str(tag.get("condition")))
    for group, conditions in groups.items():
        if len(set(conditions)) != len(conditions):
            raise QcidgenError(
                f"contingency group {group!r} repeats conditions: {sorted(conditions)}")

    return PropertyReport(results)
