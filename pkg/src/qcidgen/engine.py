"""Staged derivation of graphs from an unordered list of input terms.

Each stage computes every candidate application against the stage-start
snapshot; each application must introduce at least one node labeled by a
still-unplaced input term. Choices (anchor selection, extension
confirmation, manual term classification) are resolved by a pluggable
provider, and every run yields a transcript that replays bit-exactly.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import (DerivationError, DuplicateTermError, ScriptExhaustedError,
                     TranscriptMismatchError, UnclassifiableTermError)
from .graph import LabeledGraph, Symbol
from .grammar import Grammar, Production
from .matcher import Anchor, Extension, applicable, enumerate_extensions, find_anchors
from .rewriter import IdAllocator, apply_production, plan_labels
from .taxonomy import Taxonomy

TRANSCRIPT_VERSION = 1

ANCHOR_SELECTION = "anchor_selection"
EXTENSION_CONFIRMATION = "extension_confirmation"
TERM_ASSIGNMENT = "term_assignment"
STEM_SELECTION = "stem_selection"
MANUAL_CLASSIFICATION = "manual_classification"

CHOICE_KINDS = (ANCHOR_SELECTION, EXTENSION_CONFIRMATION, TERM_ASSIGNMENT,
                STEM_SELECTION, MANUAL_CLASSIFICATION)


@dataclass
class ChoiceRequest:
    id: int
    kind: str
    candidates: List[dict]
    context: dict

    def to_json_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind,
                "candidates": self.candidates, "context": self.context}


class ChoiceProvider:
    """Answers choice requests during a derivation."""

    def answer(self, request: ChoiceRequest):
        raise NotImplementedError


class PolicyChoices(ChoiceProvider):
    """Headless policy: always the first candidate; never confirms nothing,
    never classifies unknown terms."""

    def answer(self, request: ChoiceRequest):
        if request.kind == MANUAL_CLASSIFICATION:
            return None
        if request.kind == EXTENSION_CONFIRMATION:
            return 0 if request.candidates else -1
        return 0


class ScriptedChoices(ChoiceProvider):
    """Fixed ordered answer list; running out raises ScriptExhaustedError."""

    def __init__(self, answers: Sequence):
        self._answers = list(answers)
        self._pos = 0

    def answer(self, request: ChoiceRequest):
        if self._pos >= len(self._answers):
            raise ScriptExhaustedError(request)
        answer = self._answers[self._pos]
        self._pos += 1
        return answer


class RandomChoices(ChoiceProvider):
    """Seeded random answers; used to fuzz the derivation space in tests."""

    def __init__(self, seed: int, allow_rejection: bool = True):
        self._rng = random.Random(seed)
        self._allow_rejection = allow_rejection

    def answer(self, request: ChoiceRequest):
        if request.kind == MANUAL_CLASSIFICATION:
            return None
        if request.kind == EXTENSION_CONFIRMATION:
            low = -1 if self._allow_rejection else 0
            return self._rng.randint(low, len(request.candidates) - 1)
        return self._rng.randrange(len(request.candidates))


class CallbackChoices(ChoiceProvider):
    """Delegates each request to a callable (interactive front ends)."""

    def __init__(self, fn: Callable[[ChoiceRequest], object]):
        self._fn = fn

    def answer(self, request: ChoiceRequest):
        return self._fn(request)


@dataclass
class Candidate:
    """One possible application: production + anchor + term assignment."""

    labels: FrozenSet[str]            # input labels this application places
    production_index: int
    production: str
    anchor: Anchor
    assignments: Dict[str, Symbol]    # right-region vertex -> assigned term

    def describe(self) -> dict:
        return {
            "production": self.production,
            "anchor": dict(self.anchor.vertex_map),
            "assignments": {vid: sym.text for vid, sym in sorted(self.assignments.items())},
            "labels": sorted(self.labels),
        }


@dataclass
class Transcript:
    terms: List[str]
    choices: List[dict] = field(default_factory=list)
    stages: List[dict] = field(default_factory=list)
    version: int = TRANSCRIPT_VERSION

    def to_json_dict(self) -> dict:
        return {"version": self.version, "terms": self.terms,
                "choices": self.choices, "stages": self.stages}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "Transcript":
        if doc.get("version") != TRANSCRIPT_VERSION:
            raise TranscriptMismatchError(
                f"unsupported transcript version {doc.get('version')!r}")
        return cls(terms=list(doc["terms"]), choices=list(doc.get("choices", [])),
                   stages=list(doc.get("stages", [])))

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls.from_json_dict(json.loads(text))


@dataclass
class FailureReport:
    stage: int
    stuck: Dict[str, List[str]]  # term -> productions that could introduce it

    def to_json_dict(self) -> dict:
        return {"stage": self.stage, "stuck": self.stuck}


@dataclass
class DerivationResult:
    success: bool
    graph: LabeledGraph
    transcript: Transcript
    taxonomy: Taxonomy
    failure: Optional[FailureReport] = None


def _term_slots(p: Production, taxonomy: Taxonomy) -> Tuple[List[str], List[str]]:
    """Right-region V_R,new ids split into (nonterminal slots, fixed terminals)."""
    new_ids, _ = p.right_partition(taxonomy)
    slots = [vid for vid in new_ids if p.label_of(vid).is_nonterminal]
    fixed = [vid for vid in new_ids if p.label_of(vid).is_terminal]
    return slots, fixed


def stage_candidates(host: LabeledGraph, unplaced: Set[str], grammar: Grammar,
                     taxonomy: Taxonomy) -> List[Candidate]:
    """All applications valid against the stage-start host, each placing one
    or more distinct unplaced labels, in canonical order."""
    out: List[Candidate] = []
    for pi, p in enumerate(grammar.productions):
        slots, fixed = _term_slots(p, taxonomy)
        if not slots and not fixed:
            continue  # cannot introduce an input label
        fixed_labels = {p.label_of(vid).text for vid in fixed}
        if fixed_labels - unplaced:
            continue  # would insert a new node not drawn from the input list
        slot_options: List[List[Symbol]] = []
        for vid in slots:
            options = [Symbol(t) for t in sorted(unplaced - fixed_labels)
                       if taxonomy.label_matches(Symbol(t), p.label_of(vid))]
            slot_options.append(options)
        if any(not opts for opts in slot_options):
            continue
        assignments_list: List[Dict[str, Symbol]] = []
        for combo in itertools.product(*slot_options) if slots else [()]:
            texts = [s.text for s in combo]
            if len(set(texts)) != len(texts):
                continue
            assignments_list.append(dict(zip(slots, combo)))
        if not assignments_list:
            continue
        anchors = find_anchors(p, host, taxonomy)
        for anchor in anchors:
            for assignment in assignments_list:
                labels = frozenset(fixed_labels | {s.text for s in assignment.values()})
                out.append(Candidate(labels, pi, p.name, anchor, assignment))
    return out


def _hint_productions(term: Symbol, grammar: Grammar, taxonomy: Taxonomy) -> List[str]:
    hints = []
    for p in grammar.productions:
        slots, fixed = _term_slots(p, taxonomy)
        if any(p.label_of(vid).text == term.text for vid in fixed):
            hints.append(p.name)
            continue
        for vid in slots:
            try:
                if taxonomy.label_matches(term, p.label_of(vid)):
                    hints.append(p.name)
                    break
            except Exception:
                continue
    return hints


class _Session:
    """Bookkeeping for one derivation run."""

    def __init__(self, provider: ChoiceProvider, transcript: Transcript):
        self.provider = provider
        self.transcript = transcript
        self._next_request = 0

    def ask(self, kind: str, candidates: List[dict], context: dict):
        request = ChoiceRequest(self._next_request, kind, candidates, context)
        self._next_request += 1
        response = self.provider.answer(request)
        self.transcript.choices.append(
            {**request.to_json_dict(), "response": response})
        return response

    def ask_index(self, kind: str, candidates: List[dict], context: dict,
                  allow_rejection: bool = False) -> int:
        response = self.ask(kind, candidates, context)
        low = -1 if allow_rejection else 0
        if not isinstance(response, int) or not (low <= response < len(candidates)):
            raise DerivationError(
                f"invalid response {response!r} to {kind} request "
                f"with {len(candidates)} candidates")
        return response


def derive(grammar: Grammar, taxonomy: Taxonomy, terms: Sequence,
           choices: Optional[ChoiceProvider] = None,
           on_stage: Optional[Callable[[int, LabeledGraph, Taxonomy], None]] = None) -> DerivationResult:
    """Run a full derivation; see the module docstring for stage semantics."""
    provider = choices or PolicyChoices()
    symbols = [t if isinstance(t, Symbol) else Symbol(t) for t in terms]
    for sym in symbols:
        if sym.is_nonterminal:
            raise DerivationError(f"input terms must be terminal, got {sym.text!r}")
    texts = [s.text for s in symbols]
    if len(set(texts)) != len(texts):
        dupes = sorted({t for t in texts if texts.count(t) > 1})
        raise DuplicateTermError(f"duplicate input terms: {dupes}")

    tax = taxonomy.copy()
    transcript = Transcript(terms=sorted(texts))
    session = _Session(provider, transcript)

    for sym in sorted(symbols):
        if not tax.is_classified(sym):
            response = session.ask(
                MANUAL_CLASSIFICATION,
                [{"class": name} for name in tax.class_names],
                {"term": sym.text})
            if response is None:
                raise UnclassifiableTermError(sym.text)
            if isinstance(response, str):
                response = [response]
            tax.register_terminal(sym, response)

    host = grammar.initial_graph.copy()
    allocator = IdAllocator(host.vertices)
    unplaced: Set[str] = set(texts)
    stage = 0

    while unplaced:
        stage += 1
        snapshot = host.copy()
        candidates = stage_candidates(snapshot, unplaced, grammar, tax)
        placed_stage: Set[str] = set()
        applications: List[dict] = []

        # place labels in grammar order of their earliest candidate rule, so
        # applications later in the stage can attach to nodes placed earlier
        # (a disease enters before the test that reads it)
        def stage_key(label: str):
            indices = [c.production_index for c in candidates if label in c.labels]
            return (min(indices) if indices else len(grammar.productions), label)

        for label in sorted(unplaced, key=stage_key):
            if label in placed_stage:
                continue
            options = [c for c in candidates
                       if label in c.labels and not (c.labels & placed_stage)]
            if not options:
                continue
            if len(options) > 1:
                idx = session.ask_index(
                    ANCHOR_SELECTION, [c.describe() for c in options],
                    {"stage": stage, "label": label})
            else:
                idx = 0
            chosen = options[idx]
            p = grammar.productions[chosen.production_index]

            # the candidate was matched against the stage-start snapshot; skip
            # it if an earlier application in this stage removed its anchor
            if not chosen.anchor.host_image() <= host.vertices:
                continue

            # extensions attach to the evolved host, so an application later
            # in the stage can reach nodes placed earlier in the same stage
            ext_candidates = enumerate_extensions(chosen.anchor, p, host, tax)
            confirmed: List[Extension] = []
            used_images: Set[str] = set()
            for comp in sorted(ext_candidates, key=lambda c: min(c) if c else ""):
                exts = [e for e in ext_candidates[comp]
                        if not (set(e.map.values()) & used_images)]
                if not exts:
                    continue
                eidx = session.ask_index(
                    EXTENSION_CONFIRMATION,
                    [{"component": sorted(comp), "map": dict(e.vertex_map)} for e in exts],
                    {"stage": stage, "label": label, "production": p.name},
                    allow_rejection=True)
                if eidx >= 0:
                    confirmed.append(exts[eidx])
                    used_images |= set(exts[eidx].map.values())

            plan = plan_labels(p, chosen.anchor, tax, host, chosen.assignments)

            if not applicable(chosen.anchor, confirmed, host, p):
                continue

            outcome = apply_production(p, chosen.anchor, confirmed, host, tax,
                                       labels=plan, allocator=allocator)
            host = outcome.graph
            placed_stage |= chosen.labels
            applications.append({
                "production": p.name,
                "labels": sorted(chosen.labels),
                "anchor": dict(chosen.anchor.vertex_map),
                "extensions": [{"component": sorted(e.component),
                                "map": dict(e.vertex_map)} for e in confirmed],
                "plan": {vid: sym.text for vid, sym in sorted(plan.items())},
                "inserted": dict(sorted(outcome.inserted.items())),
                "removed": sorted(outcome.removed),
                "reused": sorted(outcome.reused),
            })

        if not placed_stage:
            stuck = {t: _hint_productions(Symbol(t), grammar, tax)
                     for t in sorted(unplaced)}
            transcript.stages.append({"index": stage, "applications": applications})
            return DerivationResult(False, host, transcript, tax,
                                    FailureReport(stage, stuck))

        unplaced -= placed_stage
        transcript.stages.append({"index": stage, "applications": applications})
        if on_stage is not None:
            on_stage(stage, host, tax)

    return DerivationResult(True, host, transcript, tax)


class _ReplayChoices(ChoiceProvider):
    def __init__(self, recorded: List[dict]):
        self._recorded = list(recorded)
        self._pos = 0

    def answer(self, request: ChoiceRequest):
        if self._pos >= len(self._recorded):
            raise TranscriptMismatchError(
                f"transcript has no answer for request {request.id} ({request.kind})")
        rec = self._recorded[self._pos]
        self._pos += 1
        if rec["kind"] != request.kind or len(rec["candidates"]) != len(request.candidates):
            raise TranscriptMismatchError(
                f"request {request.id} ({request.kind}, "
                f"{len(request.candidates)} candidates) does not match recorded "
                f"({rec['kind']}, {len(rec['candidates'])} candidates)")
        return rec["response"]


def replay(transcript: Transcript, grammar: Grammar, taxonomy: Taxonomy,
           terms: Sequence) -> LabeledGraph:
    """Re-execute a recorded derivation; the result is isomorphic (indeed
    identical, ids included) to the original final graph."""
    texts = sorted(t.text if isinstance(t, Symbol) else str(t) for t in terms)
    if texts != sorted(transcript.terms):
        raise TranscriptMismatchError(
            f"term list {texts} does not match transcript terms {transcript.terms}")
    result = derive(grammar, taxonomy, terms, _ReplayChoices(transcript.choices))
    if not result.success:
        raise TranscriptMismatchError("replayed derivation failed")
    recorded_apps = [a["production"] for s in transcript.stages
                     for a in s["applications"]]
    replayed_apps = [a["production"] for s in result.transcript.stages
                     for a in s["applications"]]
    if recorded_apps != replayed_apps:
        raise TranscriptMismatchError(
            f"application sequence {replayed_apps} does not match recorded {recorded_apps}")
    return result.graph
