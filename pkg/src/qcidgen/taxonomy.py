"""Classification tree of node labels.

Terminal terms are grouped under nonterminal classes; classes carry
node-kind metadata (decision/chance/utility) and optional variant-label
markers used to synthesize labels such as "Future appendicitis" from a
matched stem node.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Set

from .errors import TaxonomyError, UnknownClassError
from .graph import Symbol

KINDS = ("decision", "chance", "utility")


@dataclass(frozen=True)
class VariantSpec:
    """Recipe for a synthesized variant label: affix + stem of a matched node."""

    affix_kind: str  # "prefix" | "suffix"
    affix_text: str
    stem_class: Symbol

    def __post_init__(self):
        if self.affix_kind not in ("prefix", "suffix"):
            raise TaxonomyError(f"bad affix_kind {self.affix_kind!r}")
        if not self.affix_text:
            raise TaxonomyError("variant affix_text must be nonempty")
        if not self.stem_class.is_nonterminal:
            raise TaxonomyError("variant stem_class must be a nonterminal class")

    def to_json_dict(self) -> dict:
        return {"affix_kind": self.affix_kind, "affix_text": self.affix_text,
                "stem_class": self.stem_class.text}

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "VariantSpec":
        return cls(doc["affix_kind"], doc["affix_text"], Symbol(doc["stem_class"]))


@dataclass(frozen=True)
class TaxonomyClass:
    name: Symbol
    parent: Optional[Symbol] = None
    kind: Optional[str] = None
    variant: Optional[VariantSpec] = None
    shade: Optional[str] = None  # rendering hint only ("dark" | "light")

    def __post_init__(self):
        if not self.name.is_nonterminal:
            raise TaxonomyError(f"class name must be a nonterminal: {self.name.text!r}")
        if self.kind is not None and self.kind not in KINDS:
            raise TaxonomyError(f"bad kind {self.kind!r} for class {self.name.text!r}")


class Taxonomy:
    """Classification tree plus the vocabulary of classified terminals.

    Derivation sessions work on independent copies over a shared immutable
    base (see :meth:`copy`); the base is never mutated mid-derivation.
    """

    def __init__(self, classes: Iterable[TaxonomyClass] = (),
                 terminals: Optional[Mapping[str, Set[str]]] = None):
        self._classes: Dict[str, TaxonomyClass] = {}
        for c in classes:
            if c.name.text in self._classes:
                raise TaxonomyError(f"duplicate class name {c.name.text!r}")
            self._classes[c.name.text] = c
        self._terminals: Dict[str, Set[str]] = {
            t: set(cs) for t, cs in (terminals or {}).items()
        }
        self._validate()

    def _validate(self) -> None:
        roots = []
        for c in self._classes.values():
            if c.parent is None:
                roots.append(c.name.text)
                continue
            if c.parent.text not in self._classes:
                raise UnknownClassError(c.parent.text, self._classes)
            # walk to the root, detecting cycles
            seen = {c.name.text}
            cur = c
            while cur.parent is not None:
                if cur.parent.text in seen:
                    raise TaxonomyError(
                        f"cyclic parent links at class {c.name.text!r}")
                seen.add(cur.parent.text)
                cur = self._classes[cur.parent.text]
        if self._classes and len(roots) != 1:
            raise TaxonomyError(f"expected a single root class, found {roots}")
        for c in self._classes.values():
            if c.variant and c.variant.stem_class.text not in self._classes:
                raise UnknownClassError(c.variant.stem_class.text, self._classes)
        for term, classnames in self._terminals.items():
            for name in classnames:
                if name not in self._classes:
                    raise UnknownClassError(name, self._classes)

    # -- inspection ------------------------------------------------------

    @property
    def class_names(self) -> List[str]:
        return sorted(self._classes)

    def get_class(self, name: str) -> TaxonomyClass:
        try:
            return self._classes[name]
        except KeyError:
            raise UnknownClassError(name, self._classes) from None

    def has_class(self, name: str) -> bool:
        return name in self._classes

    def classes_of(self, term: Symbol) -> Set[str]:
        return set(self._terminals.get(term.text, ()))

    def is_classified(self, term: Symbol) -> bool:
        return term.text in self._terminals

    def terminals(self) -> List[str]:
        return sorted(self._terminals)

    def ancestors_or_self(self, name: str) -> Iterator[TaxonomyClass]:
        cur: Optional[TaxonomyClass] = self.get_class(name)
        while cur is not None:
            yield cur
            cur = self._classes[cur.parent.text] if cur.parent else None

    def copy(self) -> "Taxonomy":
        t = Taxonomy.__new__(Taxonomy)
        t._classes = dict(self._classes)
        t._terminals = {k: set(v) for k, v in self._terminals.items()}
        return t

    # -- matching --------------------------------------------------------

    def label_matches(self, host_label: Symbol, pattern_label: Symbol) -> bool:
        """Does a host vertex labeled ``host_label`` match a production
        vertex labeled ``pattern_label``?

        Terminal patterns match by equality; nonterminal patterns match any
        terminal classified under that class or a descendant of it.
        """
        if pattern_label.is_terminal:
            return host_label == pattern_label
        pattern = self.get_class(pattern_label.text)
        if host_label.is_nonterminal:
            return False
        for name in self._terminals.get(host_label.text, ()):
            if any(a.name == pattern.name for a in self.ancestors_or_self(name)):
                return True
        return False

    def kind_of(self, label: Symbol) -> str:
        """Node kind (decision/chance/utility) via nearest-ancestor lookup."""
        if label.is_nonterminal:
            names = [label.text]
        else:
            names = sorted(self._terminals.get(label.text, ()))
            if not names:
                raise TaxonomyError(f"label {label.text!r} is not classified")
        kinds = set()
        for name in names:
            for a in self.ancestors_or_self(name):
                if a.kind is not None:
                    kinds.add(a.kind)
                    break
        if not kinds:
            raise TaxonomyError(f"no ancestor of {label.text!r} declares a kind")
        if len(kinds) > 1:
            raise TaxonomyError(
                f"label {label.text!r} has conflicting kinds: {sorted(kinds)}")
        return kinds.pop()

    # -- mutation (builder / session use) --------------------------------

    def register_terminal(self, term: Symbol, classes: Iterable[str]) -> None:
        """Classify ``term`` under ``classes``; repeated registration unions."""
        if term.is_nonterminal:
            raise TaxonomyError(f"cannot register nonterminal {term.text!r} as terminal")
        classes = set(classes)
        for name in classes:
            if name not in self._classes:
                raise UnknownClassError(name, self._classes)
        self._terminals.setdefault(term.text, set()).update(classes)

    def synthesize_variant(self, spec: VariantSpec, stem_label: Symbol) -> Symbol:
        """Build the variant terminal from affix + stem.

        Prefix variants case-fold the stem's leading letter ("Future " +
        "Appendicitis" -> "Future appendicitis"). Registration under the
        variant class is the caller's job (the class is not part of the spec).
        """
        if stem_label.is_nonterminal:
            raise TaxonomyError("variant stem must be a terminal symbol")
        stem = stem_label.text
        if spec.affix_kind == "prefix":
            return Symbol(spec.affix_text + stem[0].lower() + stem[1:])
        return Symbol(stem + spec.affix_text)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        classes = []
        for name in sorted(self._classes):
            c = self._classes[name]
            entry: dict = {"name": c.name.text}
            if c.parent:
                entry["parent"] = c.parent.text
            if c.kind:
                entry["kind"] = c.kind
            if c.shade:
                entry["shade"] = c.shade
            if c.variant:
                entry["variant"] = c.variant.to_json_dict()
            classes.append(entry)
        terminals = [{"term": t, "classes": sorted(cs)}
                     for t, cs in sorted(self._terminals.items())]
        return {"classes": classes, "terminals": terminals}


def load_taxonomy(text: str) -> Taxonomy:
    """Parse and validate a taxonomy document (JSON)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaxonomyError(f"taxonomy parse error: {exc}") from exc
    return taxonomy_from_json_dict(doc)


def taxonomy_from_json_dict(doc: Mapping) -> Taxonomy:
    if not isinstance(doc, Mapping):
        raise TaxonomyError(
            f"taxonomy document must be an object, got {type(doc).__name__}")
    classes = []
    for entry in doc.get("classes", []):
        try:
            classes.append(TaxonomyClass(
                name=Symbol(entry["name"]),
                parent=Symbol(entry["parent"]) if entry.get("parent") else None,
                kind=entry.get("kind"),
                variant=VariantSpec.from_json_dict(entry["variant"])
                if entry.get("variant") else None,
                shade=entry.get("shade"),
            ))
        except (KeyError, ValueError) as exc:
            raise TaxonomyError(f"bad class entry {entry!r}: {exc}") from exc
    terminals = {}
    for entry in doc.get("terminals", []):
        terminals.setdefault(entry["term"], set()).update(entry["classes"])
    return Taxonomy(classes, terminals)


def load_vocabulary(taxonomy: Taxonomy, text: str) -> None:
    """Register the terminals of a vocabulary document into ``taxonomy``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaxonomyError(f"vocabulary parse error: {exc}") from exc
    for entry in doc.get("terminals", []):
        taxonomy.register_terminal(Symbol(entry["term"]), entry["classes"])
