"""Application of a production at a confirmed anchor.

Deletes the image of V_L, inserts the right region (with variant-label
synthesis and deduplication against existing host nodes), and adds the
embedding edges that connect inserted vertices to the matched environment.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from .errors import InapplicableError, StemAmbiguityError, TaxonomyError
from .graph import Edge, LabeledGraph, Symbol
from .grammar import Production
from .matcher import Anchor, Extension, applicable
from .taxonomy import Taxonomy


@dataclass
class RewriteOutcome:
    graph: LabeledGraph
    inserted: Dict[str, str]       # production V_R vertex -> host vertex id
    removed: FrozenSet[str]        # former host vertex ids (image of V_L)
    new_edges: FrozenSet[Edge]     # embedding edges added
    reused: FrozenSet[str]         # V_R vertices deduplicated onto existing hosts


class IdAllocator:
    """Session-scoped fresh-id source; recorded ids make replays exact."""

    def __init__(self, taken: Iterable[str] = (), prefix: str = "n"):
        self.prefix = prefix
        self._taken = set(taken)
        self._next = 1

    def fresh(self) -> str:
        while f"{self.prefix}{self._next}" in self._taken:
            self._next += 1
        vid = f"{self.prefix}{self._next}"
        self._taken.add(vid)
        self._next += 1
        return vid

    def reserve(self, vid: str) -> None:
        self._taken.add(vid)


def plan_labels(p: Production, a: Anchor, taxonomy: Taxonomy, host: LabeledGraph,
                assignments: Optional[Mapping[str, Symbol]] = None) -> Dict[str, Symbol]:
    """Concrete labels for every right-region vertex.

    Non-variant vertices with nonterminal labels take the term supplied in
    ``assignments`` (chosen by the derivation engine from the input list);
    terminal labels stand as given. Variant vertices synthesize affix + stem,
    where the stem is the label of the unique matched or planned node of the
    variant's stem class.
    """
    assignments = dict(assignments or {})
    new_ids, var_ids = p.right_partition(taxonomy)
    plan: Dict[str, Symbol] = {}
    for vid in new_ids:
        label = p.label_of(vid)
        if label.is_terminal:
            plan[vid] = label
            continue
        if vid not in assignments:
            raise TaxonomyError(
                f"production {p.name!r}: no term assigned to right vertex {vid!r}")
        term = assignments[vid]
        if not taxonomy.label_matches(term, label):
            raise TaxonomyError(
                f"term {term.text!r} does not match class {label.text!r}")
        plan[vid] = term

    matched: List[Symbol] = [host.label(hv) for _, hv in a.vertex_map]
    for vid in var_ids:
        spec = p.variant_spec(vid, taxonomy)
        assert spec is not None
        candidates = [lab for lab in matched + list(plan.values())
                      if lab.is_terminal and taxonomy.label_matches(lab, spec.stem_class)]
        stems = sorted({c.text for c in candidates})
        if len(stems) != 1:
            raise StemAmbiguityError(p.name, vid, stems)
        plan[vid] = taxonomy.synthesize_variant(spec, Symbol(stems[0]))
    return plan


def apply_production(p: Production, a: Anchor, confirmed: Iterable[Extension],
                     host: LabeledGraph, taxonomy: Taxonomy,
                     labels: Optional[Mapping[str, Symbol]] = None,
                     allocator: Optional[IdAllocator] = None,
                     variant_classes: bool = True) -> RewriteOutcome:
    """Apply ``p`` at anchor ``a`` with the confirmed extensions.

    ``labels`` is the right-region label plan (computed via
    :func:`plan_labels` when omitted). Synthesized variant terminals are
    registered into ``taxonomy`` under their variant class.
    """
    confirmed = list(confirmed)
    if not applicable(a, confirmed, host, p):
        raise InapplicableError(
            f"production {p.name!r} is not applicable at anchor {a.vertex_map!r}")
    if labels is None:
        labels = plan_labels(p, a, taxonomy, host)
    allocator = allocator or IdAllocator(host.vertices)

    amap = a.map
    removed = frozenset(amap[v] for v in p.v_left)
    survivors = {v: host.label(v) for v in host.vertices if v not in removed}
    surviving_edges = {e for e in host.edges
                      if e[0] not in removed and e[1] not in removed}

    new_ids, var_ids = p.right_partition(taxonomy)
    label_to_host = {lab.text: v for v, lab in survivors.items()}
    inserted: Dict[str, str] = {}
    reused: Set[str] = set()
    result_labels = dict(survivors)
    for vid in sorted(p.v_right):
        label = labels[vid]
        if vid in var_ids and label.text in label_to_host:
            inserted[vid] = label_to_host[label.text]
            reused.add(vid)
            continue
        hid = allocator.fresh()
        inserted[vid] = hid
        result_labels[hid] = label
        label_to_host[label.text] = hid
        if vid in var_ids and variant_classes:
            vlabel = p.label_of(vid)
            if vlabel.is_nonterminal and taxonomy.has_class(vlabel.text):
                taxonomy.register_terminal(label, {vlabel.text})

    # embedding maps: V_B via the anchor, V_A via confirmed extensions
    env_map: Dict[str, str] = {v: amap[v] for v in p.v_below}
    for ext in confirmed:
        env_map.update(ext.map)

    new_edges: Set[Edge] = set()
    for s, t, m in p.edges:
        if s in p.v_right and t in p.v_right:
            new_edges.add((inserted[s], inserted[t], m))
        elif s in env_map and t in p.v_right:
            new_edges.add((env_map[s], inserted[t], m))
        elif s in p.v_right and t in env_map:
            new_edges.add((inserted[s], env_map[t], m))

    graph = LabeledGraph(result_labels, surviving_edges | new_edges)
    return RewriteOutcome(
        graph=graph,
        inserted=inserted,
        removed=removed,
        new_edges=frozenset(new_edges - surviving_edges),
        reused=frozenset(reused),
    )
