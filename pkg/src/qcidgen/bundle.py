"""Loading and validation of asset bundles (grammar + taxonomy + vocabulary).

A bundle is a directory with fixed filenames: ``grammar.json``,
``taxonomy.json``, ``vocabulary.json`` and an optional ``examples/``
subdirectory with term lists, choice scripts and golden outputs.
"""
from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import BundleError, GrammarError, QcidgenError, TaxonomyError
from .grammar import Grammar, parse_grammar
from .taxonomy import Taxonomy, load_taxonomy, load_vocabulary

REQUIRED_FILES = ("grammar.json", "taxonomy.json", "vocabulary.json")
MAX_NONTERMINALS_PER_RULE = 7


@dataclass
class Bundle:
    path: Path
    grammar: Grammar
    taxonomy: Taxonomy

    @property
    def examples_dir(self) -> Path:
        return self.path / "examples"


def medical_pack_path() -> Path:
    """Location of the shipped medical grammar pack."""
    return Path(str(importlib.resources.files("qcidgen"))) / "packs" / "medical"


def load_bundle(path) -> Bundle:
    """Load and validate a bundle directory; any invalid component rejects
    the whole bundle with the file and reason."""
    path = Path(path)
    if not path.is_dir():
        raise BundleError(f"bundle directory not found: {path}")
    for name in REQUIRED_FILES:
        if not (path / name).is_file():
            raise BundleError(f"bundle {path} is missing {name}")

    try:
        taxonomy = load_taxonomy((path / "taxonomy.json").read_text())
    except TaxonomyError as exc:
        raise BundleError(f"{path / 'taxonomy.json'}: {exc}") from exc
    try:
        load_vocabulary(taxonomy, (path / "vocabulary.json").read_text())
    except (TaxonomyError, QcidgenError) as exc:
        raise BundleError(f"{path / 'vocabulary.json'}: {exc}") from exc
    try:
        grammar = parse_grammar((path / "grammar.json").read_text())
    except GrammarError as exc:
        raise BundleError(f"{path / 'grammar.json'}: {exc}") from exc

    for p in grammar.productions:
        if p.nonterminal_count() > MAX_NONTERMINALS_PER_RULE:
            raise BundleError(
                f"{path / 'grammar.json'}: production {p.name!r} has "
                f"{p.nonterminal_count()} nonterminal symbols "
                f"(limit {MAX_NONTERMINALS_PER_RULE})")
        for v in p.vertices.values():
            if v.label.is_nonterminal and not taxonomy.has_class(v.label.text):
                raise BundleError(
                    f"{path / 'grammar.json'}: production {p.name!r} references "
                    f"unknown class {v.label.text!r}")
            if v.variant and not taxonomy.has_class(v.variant.stem_class.text):
                raise BundleError(
                    f"{path / 'grammar.json'}: production {p.name!r} variant on "
                    f"{v.id!r} names unknown stem class {v.variant.stem_class.text!r}")
    return Bundle(path, grammar, taxonomy)
