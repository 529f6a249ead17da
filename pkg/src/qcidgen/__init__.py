"""Graph-grammar construction of qualitative contingent influence diagrams.

Build decision models from unordered lists of domain terms by repeatedly
applying four-region graph-grammar productions, steered either by a human
(interactive choices) or by deterministic policy.
"""

from .graph import (INFO, MINUS, PLAIN, PLUS, UNKNOWN, LabeledGraph, Symbol,
                    chain_exists, connected_components, isomorphic, span)
from .taxonomy import Taxonomy, TaxonomyClass, VariantSpec, load_taxonomy
from .grammar import Grammar, Production, ProductionVertex, parse_grammar, string_abbreviation
from .matcher import Anchor, Extension, applicable, enumerate_extensions, find_anchors, old_edges
from .rewriter import IdAllocator, RewriteOutcome, apply_production, plan_labels
from .engine import (ChoiceProvider, ChoiceRequest, DerivationResult, PolicyChoices,
                     RandomChoices, ScriptedChoices, Transcript, derive, replay,
                     stage_candidates)
from .qcid import PropertyReport, QcidModel, check_properties, classify_model
from .export import layout, to_diagram_dict, to_diagram_json, to_dot
from .bundle import Bundle, load_bundle, medical_pack_path

__version__ = "0.1.0"
