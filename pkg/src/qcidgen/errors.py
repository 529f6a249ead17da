"""Exception hierarchy shared across the package."""


class QcidgenError(Exception):
    """Base class for all errors raised by this package."""


class UnknownVertexError(QcidgenError):
    def __init__(self, vertex_id: str):
        super().__init__(f"unknown vertex id: {vertex_id!r}")
        self.vertex_id = vertex_id


class DuplicateEdgeError(QcidgenError):
    def __init__(self, edge):
        super().__init__(f"duplicate edge triple: {edge!r}")
        self.edge = edge


class TaxonomyError(QcidgenError):
    """Malformed taxonomy document or invalid taxonomy operation."""


class UnknownClassError(TaxonomyError):
    def __init__(self, name: str, valid=()):
        msg = f"unknown taxonomy class: {name!r}"
        if valid:
            msg += "; valid classes: " + ", ".join(sorted(valid))
        super().__init__(msg)
        self.name = name


class GrammarError(QcidgenError):
    """Malformed grammar document or production."""


class StemAmbiguityError(QcidgenError):
    """Zero or several matched nodes could supply a variant label's stem."""

    def __init__(self, production: str, vertex: str, candidates):
        self.production = production
        self.vertex = vertex
        self.candidates = sorted(candidates)
        super().__init__(
            f"variant vertex {vertex!r} in production {production!r} has "
            f"{len(self.candidates)} candidate stems: {self.candidates}"
        )


class InapplicableError(QcidgenError):
    """A production was applied at an anchor that fails the dangling-edge condition."""


class DerivationError(QcidgenError):
    """Errors raised while running a derivation."""


class DuplicateTermError(DerivationError):
    pass


class UnclassifiableTermError(DerivationError):
    def __init__(self, term: str):
        super().__init__(f"term {term!r} is not classified and no classification was provided")
        self.term = term


class ScriptExhaustedError(DerivationError):
    def __init__(self, request):
        super().__init__(f"choice script exhausted at request {request.id} ({request.kind})")
        self.request = request


class TranscriptMismatchError(DerivationError):
    """A transcript does not replay against the given grammar/taxonomy/terms."""


class BundleError(QcidgenError):
    """An asset bundle failed to load or validate."""


class LayoutError(QcidgenError):
    """Layout requested for a model that cannot be layered (e.g. cyclic)."""
