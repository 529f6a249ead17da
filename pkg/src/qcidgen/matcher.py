"""Anchor and extension search, and the applicability condition.

An anchor maps the determinate-plus-left part of a production (the span of
V_L and V_B) injectively into the host; extensions enlarge an anchor over
one chain-connected component of the indeterminate region V_A. A rule is
applicable at an anchor when every host edge incident to the image of V_L
is accounted for, so removal leaves no dangling edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .graph import Edge, LabeledGraph, connected_components
from .grammar import Production
from .taxonomy import Taxonomy

VertexMap = Tuple[Tuple[str, str], ...]  # sorted (production vertex, host vertex) pairs


def _as_map(pairs: VertexMap) -> Dict[str, str]:
    return dict(pairs)


@dataclass(frozen=True)
class Anchor:
    """Monomorphism of span(V_L + V_B) into the host."""

    production: str
    vertex_map: VertexMap

    @property
    def map(self) -> Dict[str, str]:
        return _as_map(self.vertex_map)

    def host_image(self) -> FrozenSet[str]:
        return frozenset(h for _, h in self.vertex_map)


@dataclass(frozen=True)
class Extension:
    """Enlargement of an anchor over one connected component of V_A."""

    anchor: Anchor
    component: FrozenSet[str]
    vertex_map: VertexMap  # component vertices only

    @property
    def map(self) -> Dict[str, str]:
        return _as_map(self.vertex_map)

    def combined_map(self) -> Dict[str, str]:
        m = self.anchor.map
        m.update(self.map)
        return m


def _match_order(pattern: Sequence[str], p: Production) -> List[str]:
    # higher-degree pattern vertices first narrows the search fastest
    degree = {v: 0 for v in pattern}
    pset = set(pattern)
    for s, t, _ in p.edges:
        if s in pset and t in pset:
            degree[s] += 1
            degree[t] += 1
    return sorted(pattern, key=lambda v: (-degree[v], v))


def _extend_matches(p: Production, host: LabeledGraph, taxonomy: Taxonomy,
                    fixed: Dict[str, str], targets: Sequence[str],
                    relevant_edges: Iterable[Edge]) -> List[Dict[str, str]]:
    """All injective, label/edge-compatible enlargements of ``fixed`` over
    ``targets``. ``relevant_edges`` are the production edges that must map
    to host edges once their endpoints are assigned."""
    order = _match_order(list(targets), p)
    relevant = list(relevant_edges)
    results: List[Dict[str, str]] = []
    assignment = dict(fixed)
    used = set(fixed.values())

    def edges_ok() -> bool:
        for s, t, m in relevant:
            if s in assignment and t in assignment:
                if not host.has_edge(assignment[s], assignment[t], m):
                    return False
        return True

    def backtrack(i: int) -> None:
        if i == len(order):
            results.append({v: assignment[v] for v in order})
            return
        pv = order[i]
        plabel = p.label_of(pv)
        for hv in sorted(host.vertices):
            if hv in used:
                continue
            if not taxonomy.label_matches(host.label(hv), plabel):
                continue
            assignment[pv] = hv
            used.add(hv)
            if edges_ok():
                backtrack(i + 1)
            del assignment[pv]
            used.remove(hv)

    backtrack(0)
    return results


def find_anchors(p: Production, host: LabeledGraph, taxonomy: Taxonomy) -> List[Anchor]:
    """All anchors of ``p`` in ``host``, canonically ordered.

    An empty determinate-plus-left part yields exactly one empty anchor.
    """
    pattern = sorted(p.v_left | p.v_below)
    pat_set = set(pattern)
    relevant = [e for e in p.edges if e[0] in pat_set and e[1] in pat_set]
    maps = _extend_matches(p, host, taxonomy, {}, pattern, relevant)
    anchors = [Anchor(p.name, tuple(sorted(m.items()))) for m in maps]
    return sorted(anchors, key=lambda a: tuple(h for _, h in a.vertex_map))


def enumerate_extensions(a: Anchor, p: Production, host: LabeledGraph,
                         taxonomy: Taxonomy) -> Dict[FrozenSet[str], List[Extension]]:
    """Per connected component of V_A, all extensions of ``a``.

    Components are formed over chains running through V_A itself. A
    component with no match in the host maps to an empty list (zero matches
    are legal).
    """
    prod_graph = p.as_graph()
    components = connected_components(p.v_above, prod_graph)
    anchored = a.map
    base_domain = set(anchored)
    out: Dict[FrozenSet[str], List[Extension]] = {}
    for comp in components:
        domain = base_domain | comp
        relevant = [e for e in p.edges
                    if e[0] in domain and e[1] in domain
                    and (e[0] in comp or e[1] in comp)]
        maps = _extend_matches(p, host, taxonomy, anchored, sorted(comp), relevant)
        exts = [Extension(a, comp, tuple(sorted(m.items()))) for m in maps]
        out[comp] = sorted(exts, key=lambda e: tuple(h for _, h in e.vertex_map))
    return out


def _old_edges_from_map(p: Production, combined: Dict[str, str]) -> Set[Edge]:
    left = p.v_left
    emb = p.embedding
    old: Set[Edge] = set()
    for s, t, m in p.edges:
        if s in left and t in emb and s in combined and t in combined:
            old.add((combined[s], combined[t], m))
        if s in emb and t in left and s in combined and t in combined:
            old.add((combined[s], combined[t], m))
    return old


def old_edges(ext: Extension, p: Production) -> Set[Edge]:
    """Host edges between the doomed vertices (image of V_L) and the
    embedding environment matched by this extension, both orientations."""
    return _old_edges_from_map(p, ext.combined_map())


def applicable(a: Anchor, confirmed: Iterable[Extension], host: LabeledGraph,
               p: Production) -> bool:
    """Dangling-edge safety: every host edge incident to the image of V_L
    must be the image of a V_L-internal production edge, of a V_L-V_B edge
    under the anchor, or of a V_L-V_A edge under some confirmed extension."""
    confirmed = list(confirmed)
    comps = [e.component for e in confirmed]
    if len(set(comps)) != len(comps):
        raise ValueError("confirmed extensions must belong to distinct components")
    images = [set(e.map.values()) for e in confirmed]
    for i, ei in enumerate(images):
        for ej in images[i + 1:]:
            if ei & ej:
                raise ValueError("confirmed extensions overlap on host vertices")

    amap = a.map
    left_image = {amap[v] for v in p.v_left}
    covered: Set[Edge] = set()
    # images of V_L-internal edges
    for s, t, m in p.edges:
        if s in p.v_left and t in p.v_left:
            covered.add((amap[s], amap[t], m))
    # V_L <-> V_B edges are covered by the anchor alone
    covered |= _old_edges_from_map(p, amap)
    for ext in confirmed:
        covered |= old_edges(ext, p)

    for hv in left_image:
        for edge in host.incident_edges(hv):
            if edge not in covered:
                return False
    return True
