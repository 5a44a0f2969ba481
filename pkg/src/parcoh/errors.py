"""Exception hierarchy for the rewriting engine.

Domain failures (a rule does not apply, two steps interfere, a document is
malformed) raise subclasses of :class:`RewriteError`.  Programmer errors such
as composing morphisms with mismatched endpoints raise the structural
subclasses; the CLI maps all of them to nonzero exit codes.
"""

from __future__ import annotations


class RewriteError(Exception):
    """Base class for every error raised by this package."""


class DomainMismatchError(RewriteError):
    """Two morphisms were combined but their domains do not line up."""


class CodomainMismatchError(RewriteError):
    """Two morphisms were combined but their codomains do not line up."""


class EmptyFamilyError(RewriteError):
    """A wide limit or colimit was requested for an empty family."""


class ArityMismatchError(RewriteError):
    """A cone or cocone does not have one leg per projection/injection."""


class SquareMismatchError(RewriteError):
    """The two paths around a square that must commute do not agree."""


class PreconditionError(RewriteError):
    """An operation was called on inputs outside its stated precondition."""


class GluingError(RewriteError):
    """A rule application has no pushout complement at the given match."""

    def __init__(self, kind: str, element: str, detail: str = ""):
        self.kind = kind  # "identification" or "dangling"
        self.element = element
        msg = f"gluing failure ({kind}) at {element!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class IncoherentError(RewriteError):
    """Two rewrite steps cannot share a host: some preserved item of one
    step is destroyed by the other."""

    def __init__(self, first: int, second: int, element: str):
        self.first = first
        self.second = second
        self.element = element
        super().__init__(
            f"steps {first} and {second} are not coherent: "
            f"item {element!r} has no counterpart in the other context"
        )


class NotIndependentError(RewriteError):
    """Two rewrite steps are not (parallel or sequential) independent."""

    def __init__(self, element: str, detail: str = ""):
        self.element = element
        msg = f"steps are not independent: item {element!r} cannot be traced"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ReconstructionError(RewriteError):
    """A re-verified square, limit or colimit failed to check out.

    This signals an internal inconsistency, not bad user input.
    """


class DocumentError(RewriteError):
    """Base class for errors in serialized documents."""


class ParseError(DocumentError):
    """A document is not syntactically well formed."""


class DocumentValidationError(DocumentError):
    """A document parsed but violates a structural invariant."""

    def __init__(self, element: str, detail: str):
        self.element = element
        super().__init__(f"invalid document at {element!r}: {detail}")
