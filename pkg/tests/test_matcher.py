import random

import pytest

from qcidgen.graph import Symbol
from qcidgen.grammar import Production, ProductionVertex
from qcidgen.matcher import (Anchor, applicable, enumerate_extensions,
                             find_anchors, old_edges)
from qcidgen.taxonomy import Taxonomy

from conftest import make_graph, random_graph, random_production
from oracles import brute_anchor_maps, brute_extension_maps


def _prod(name, vertices, edges=()):
    return Production(name, [ProductionVertex(v, Symbol(lab), reg)
                             for v, lab, reg in vertices], edges)


def _maps(anchors):
    return [a.map for a in anchors]


class TestFindAnchors:
    def test_worked_rule_single_anchor(self, grammar, taxonomy):
        host = make_graph({"u0": "Value to patient", "n1": "Appendicitis"},
                          [("n1", "u0", "minus")])
        p = grammar.production("add-ablative-tx")
        anchors = find_anchors(p, host, taxonomy)
        assert _maps(anchors) == [{"u": "u0", "d": "n1"}]

    def test_no_anchor_without_required_vertex(self, grammar, taxonomy):
        host = make_graph({"u0": "Value to patient"})
        p = grammar.production("add-ablative-tx")
        assert find_anchors(p, host, taxonomy) == []

    def test_empty_pattern_yields_one_empty_anchor(self, empty_taxonomy):
        p = _prod("insert", [("r", "X", "right")])
        host = make_graph({"a": "A"})
        anchors = find_anchors(p, host, empty_taxonomy)
        assert anchors == [Anchor("insert", ())]

    def test_injectivity(self, empty_taxonomy):
        p = _prod("pair", [("b1", "A", "below"), ("b2", "A", "below")])
        host = make_graph({"h": "A"})
        assert find_anchors(p, host, empty_taxonomy) == []

    def test_canonical_order(self, empty_taxonomy):
        p = _prod("one", [("b", "A", "below")])
        host = make_graph({"h2": "A", "h1": "A", "h3": "A"})
        anchors = find_anchors(p, host, empty_taxonomy)
        assert [a.map["b"] for a in anchors] == ["h1", "h2", "h3"]

    def test_pattern_edges_respected(self, empty_taxonomy):
        p = _prod("edge", [("l", "A", "left"), ("b", "B", "below")],
                  [("l", "b", "x")])
        host = make_graph({"a1": "A", "a2": "A", "b1": "B"},
                          [("a1", "b1", "x"), ("a2", "b1", "y")])
        anchors = find_anchors(p, host, empty_taxonomy)
        assert _maps(anchors) == [{"l": "a1", "b": "b1"}]

    def test_matches_brute_force_on_random_inputs(self, empty_taxonomy):
        rng = random.Random(29)
        for _ in range(60):
            p = random_production(rng)
            host = random_graph(rng, max_vertices=6)
            got = sorted(tuple(sorted(a.map.items()))
                         for a in find_anchors(p, host, empty_taxonomy))
            want = sorted(tuple(sorted(m.items()))
                          for m in brute_anchor_maps(p, host, empty_taxonomy))
            assert got == want


class TestEnumerateExtensions:
    def test_one_component_per_chain_class(self, empty_taxonomy):
        p = _prod("two-islands",
                  [("a1", "A", "above"), ("a2", "A", "above"),
                   ("l", "B", "left")],
                  [("a1", "l", "x"), ("a2", "l", "x")])
        host = make_graph({"h": "B"})
        anchors = find_anchors(p, host, empty_taxonomy)
        exts = enumerate_extensions(anchors[0], p, host, empty_taxonomy)
        # a1 and a2 only chain through the left vertex, so they are
        # separate components
        assert set(exts) == {frozenset({"a1"}), frozenset({"a2"})}

    def test_zero_matches_is_legal(self, empty_taxonomy):
        p = _prod("opt", [("a", "Z", "above"), ("l", "B", "left")],
                  [("a", "l", "x")])
        host = make_graph({"h": "B"})
        (anchor,) = find_anchors(p, host, empty_taxonomy)
        exts = enumerate_extensions(anchor, p, host, empty_taxonomy)
        assert exts == {frozenset({"a"}): []}

    def test_extension_respects_edges_to_anchor(self, grammar, taxonomy):
        # the complication rule attaches under any disease chained to the
        # new complication's parent
        host = make_graph({"u0": "Value to patient", "n1": "Appendicitis",
                           "n2": "Pneumonia"},
                          [("n1", "u0", "minus"), ("n2", "u0", "minus")])
        p = grammar.production("add-complication")
        for anchor in find_anchors(p, host, taxonomy):
            exts = enumerate_extensions(anchor, p, host, taxonomy)
            for comp, candidates in exts.items():
                for ext in candidates:
                    combined = ext.combined_map()
                    for s, t, m in p.edges:
                        if s in combined and t in combined:
                            assert host.has_edge(combined[s], combined[t], m)

    def test_matches_brute_force_on_random_inputs(self, empty_taxonomy):
        rng = random.Random(31)
        checked = 0
        while checked < 40:
            p = random_production(rng)
            if not p.v_above:
                continue
            host = random_graph(rng, max_vertices=6)
            anchors = find_anchors(p, host, empty_taxonomy)
            if not anchors:
                continue
            anchor = anchors[rng.randrange(len(anchors))]
            exts = enumerate_extensions(anchor, p, host, empty_taxonomy)
            for comp, candidates in exts.items():
                got = sorted(tuple(sorted(e.map.items())) for e in candidates)
                want = sorted(tuple(sorted(m.items())) for m in
                              brute_extension_maps(p, anchor.map, comp, host,
                                                   empty_taxonomy))
                assert got == want
            checked += 1


class TestOldEdges:
    def test_left_to_above_edges_both_orientations(self, empty_taxonomy):
        p = _prod("del", [("l", "A", "left"), ("a", "B", "above")],
                  [("l", "a", "x"), ("a", "l", "y")])
        host = make_graph({"h1": "A", "h2": "B"},
                          [("h1", "h2", "x"), ("h2", "h1", "y")])
        (anchor,) = find_anchors(p, host, empty_taxonomy)
        exts = enumerate_extensions(anchor, p, host, empty_taxonomy)
        (ext,) = exts[frozenset({"a"})]
        assert old_edges(ext, p) == {("h1", "h2", "x"), ("h2", "h1", "y")}

    def test_internal_left_edges_excluded(self, empty_taxonomy):
        p = _prod("del2", [("l1", "A", "left"), ("l2", "A", "left"),
                           ("a", "B", "above")],
                  [("l1", "l2", "x"), ("l1", "a", "x")])
        host = make_graph({"h1": "A", "h2": "A", "h3": "B"},
                          [("h1", "h2", "x"), ("h1", "h3", "x")])
        anchors = [a for a in find_anchors(p, host, empty_taxonomy)
                   if a.map == {"l1": "h1", "l2": "h2"}]
        exts = enumerate_extensions(anchors[0], p, host, empty_taxonomy)
        (ext,) = exts[frozenset({"a"})]
        assert old_edges(ext, p) == {("h1", "h3", "x")}


class TestApplicable:
    def test_pure_insertion_always_applicable(self, grammar, taxonomy):
        host = make_graph({"u0": "Value to patient"})
        p = grammar.production("add-malady")
        (anchor,) = find_anchors(p, host, taxonomy)
        assert applicable(anchor, [], host, p)

    def test_stray_incident_edge_blocks(self, empty_taxonomy):
        p = _prod("del", [("l", "A", "left"), ("b", "B", "below")],
                  [("l", "b", "x")])
        host = make_graph({"h1": "A", "h2": "B", "h3": "C"},
                          [("h1", "h2", "x"), ("h1", "h3", "x")])
        (anchor,) = find_anchors(p, host, empty_taxonomy)
        assert anchor.map == {"l": "h1", "b": "h2"}
        # the h1->h3 edge has no production counterpart
        assert not applicable(anchor, [], host, p)

    def test_extension_accounts_for_edge(self, empty_taxonomy):
        p = _prod("del", [("l", "A", "left"), ("b", "B", "below"),
                          ("a", "B", "above")],
                  [("l", "b", "x"), ("l", "a", "x")])
        host = make_graph({"h1": "A", "h2": "B", "h3": "B"},
                          [("h1", "h2", "x"), ("h1", "h3", "x")])
        anchors = [a for a in find_anchors(p, host, empty_taxonomy)
                   if a.map == {"l": "h1", "b": "h2"}]
        anchor = anchors[0]
        assert not applicable(anchor, [], host, p)
        exts = enumerate_extensions(anchor, p, host, empty_taxonomy)
        matching = [e for e in exts[frozenset({"a"})] if e.map == {"a": "h3"}]
        assert applicable(anchor, matching, host, p)

    def test_overlapping_extensions_rejected(self, empty_taxonomy):
        p = _prod("two", [("a1", "A", "above"), ("a2", "A", "above"),
                          ("l", "B", "left")],
                  [("a1", "l", "x"), ("a2", "l", "x")])
        host = make_graph({"hb": "B", "ha": "A"},
                          [("ha", "hb", "x")])
        (anchor,) = find_anchors(p, host, empty_taxonomy)
        exts = enumerate_extensions(anchor, p, host, empty_taxonomy)
        e1 = exts[frozenset({"a1"})][0]
        e2 = exts[frozenset({"a2"})][0]
        assert set(e1.map.values()) & set(e2.map.values()) == {"ha"}
        with pytest.raises(ValueError, match="overlap"):
            applicable(anchor, [e1, e2], host, p)

    def test_repeated_component_rejected(self, empty_taxonomy):
        p = _prod("one", [("a", "A", "above"), ("l", "B", "left")],
                  [("a", "l", "x")])
        host = make_graph({"hb": "B", "h1": "A", "h2": "A"},
                          [("h1", "hb", "x"), ("h2", "hb", "x")])
        (anchor,) = find_anchors(p, host, empty_taxonomy)
        exts = enumerate_extensions(anchor, p, host, empty_taxonomy)
        e1, e2 = exts[frozenset({"a"})]
        with pytest.raises(ValueError, match="distinct components"):
            applicable(anchor, [e1, e2], host, p)

    def test_random_deletions_leave_no_dangling_edges(self, empty_taxonomy):
        # applicability is exactly "removal leaves no dangling edge": verify
        # directly on random instances
        rng = random.Random(37)
        checked = 0
        while checked < 80:
            p = random_production(rng, require_left=True)
            host = random_graph(rng, max_vertices=6)
            anchors = find_anchors(p, host, empty_taxonomy)
            if not anchors:
                continue
            anchor = anchors[rng.randrange(len(anchors))]
            exts = enumerate_extensions(anchor, p, host, empty_taxonomy)
            confirmed = []
            used = set(anchor.map.values())
            for comp in sorted(exts, key=sorted):
                options = [e for e in exts[comp]
                           if not (set(e.map.values()) & used)]
                if options and rng.random() < 0.8:
                    pick = options[rng.randrange(len(options))]
                    confirmed.append(pick)
                    used |= set(pick.map.values())
            ok = applicable(anchor, confirmed, host, p)
            combined = dict(anchor.map)
            for e in confirmed:
                combined.update(e.map)
            left_image = {anchor.map[v] for v in p.v_left}
            accounted = set()
            for s, t, m in p.edges:
                if s in combined and t in combined and \
                        (s in p.v_left or t in p.v_left):
                    accounted.add((combined[s], combined[t], m))
            stray = [e for hv in left_image for e in host.incident_edges(hv)
                     if e not in accounted]
            assert ok == (not stray)
            checked += 1
