import json

import pytest

from qcidgen.errors import GrammarError
from qcidgen.graph import LabeledGraph, Symbol
from qcidgen.grammar import (Grammar, Production, ProductionVertex,
                             grammar_from_json_dict, parse_grammar,
                             string_abbreviation)


def _prod(name, vertices, edges=()):
    return Production(name, [ProductionVertex(v, Symbol(lab), reg)
                             for v, lab, reg in vertices], edges)


class TestProductionValidation:
    def test_left_right_edge_forbidden(self):
        with pytest.raises(GrammarError, match="left and right"):
            _prod("p", [("l", "A", "left"), ("r", "B", "right")],
                  [("l", "r", "x")])

    def test_above_below_edge_forbidden(self):
        with pytest.raises(GrammarError, match="above and below"):
            _prod("p", [("a", "A", "above"), ("b", "B", "below")],
                  [("a", "b", "x")])

    def test_duplicate_vertex_id(self):
        with pytest.raises(GrammarError, match="duplicate vertex"):
            _prod("p", [("v", "A", "left"), ("v", "B", "right")])

    def test_edge_to_unknown_vertex(self):
        with pytest.raises(GrammarError, match="unknown vertex"):
            _prod("p", [("v", "A", "left")], [("v", "w", "x")])

    def test_bad_region(self):
        with pytest.raises(GrammarError, match="bad region"):
            _prod("p", [("v", "A", "middle")])


class TestRegions:
    def test_worked_rule_regions(self, grammar):
        p = grammar.production("add-ablative-tx")
        v_l, v_a, v_b, v_r = p.regions()
        assert v_l == frozenset()
        assert v_a == frozenset()
        assert v_b == {"u", "d"}
        assert v_r == {"t", "fd"}

    def test_partition(self, grammar):
        for p in grammar.productions:
            v_l, v_a, v_b, v_r = p.regions()
            assert v_l | v_a | v_b | v_r == set(p.vertices)
            total = len(v_l) + len(v_a) + len(v_b) + len(v_r)
            assert total == len(p.vertices)

    def test_embedding_part(self, grammar):
        for p in grammar.productions:
            assert p.embedding == p.v_above | p.v_below


class TestStringAbbreviation:
    def test_relabeling_rule(self):
        p = string_abbreviation(Symbol("<x>"), [Symbol("<y>")])
        assert len(p.v_left) == 1 and len(p.v_right) == 1
        assert p.v_above == p.v_below == frozenset()

    def test_deletion_rule(self):
        p = string_abbreviation(Symbol("<x>"), [])
        assert len(p.v_left) == 1 and p.v_right == frozenset()

    def test_one_to_two_expansion(self):
        p = string_abbreviation(Symbol("<x>"), [Symbol("<y>"), Symbol("<z>")])
        assert len(p.v_right) == 2
        assert not p.edges


class TestGrammarValidation:
    def test_duplicate_production_names(self):
        p1 = _prod("same", [("v", "A", "right")])
        p2 = _prod("same", [("w", "B", "right")])
        with pytest.raises(GrammarError, match="duplicate production names"):
            Grammar([p1, p2], {"x"}, LabeledGraph())

    def test_edge_label_not_in_alphabet(self):
        p = _prod("p", [("a", "A", "below"), ("r", "B", "right")],
                  [("a", "r", "zap")])
        with pytest.raises(GrammarError, match="not in alphabet"):
            Grammar([p], {"x"}, LabeledGraph())

    def test_empty_production_list_is_valid(self):
        g = Grammar([], {"x"}, LabeledGraph({"v": Symbol("T")}))
        assert g.productions == []

    def test_pack_nonterminal_budget(self, grammar):
        for p in grammar.productions:
            assert p.nonterminal_count() <= 7

    def test_parse_error(self):
        with pytest.raises(GrammarError, match="parse error"):
            parse_grammar("{nope")


def test_round_trip(grammar):
    doc = grammar.to_json_dict()
    reparsed = grammar_from_json_dict(json.loads(json.dumps(doc)))
    assert reparsed.to_json_dict() == doc


def test_worked_rule_transcription_is_short(bundle):
    # the ablative-treatment rule fits a short transcription: one entry per
    # vertex and edge plus the name
    doc = bundle.grammar.production("add-ablative-tx").to_json_dict()
    assert len(doc["vertices"]) + len(doc["edges"]) + 1 <= 15
