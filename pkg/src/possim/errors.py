"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PossimError(Exception):
    """Base class for all errors raised by possim."""


class UniverseMismatchError(PossimError):
    """Two objects were built over different universes of worlds."""


class UnknownAtomError(PossimError):
    def __init__(self, atom: str, offset: int | None = None):
        super().__init__(f"unknown atom {atom!r}")
        self.atom = atom
        self.offset = offset


class FormulaSyntaxError(PossimError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class PartitionError(PossimError):
    """Raised by partition validation; ``kind`` is 'overlap', 'coverage' or 'empty'."""

    def __init__(self, kind: str, message: str, blocks: tuple = (), witness: str | None = None):
        super().__init__(message)
        self.kind = kind
        self.blocks = blocks
        self.witness = witness


class EmptyEvidenceError(PossimError):
    """The evidential set contains no world."""


class SimilarityError(PossimError):
    """A matrix failed one or more similarity-relation checks.

    ``violations`` holds one :class:`possim.similarity.Violation` per failed
    property, each with a witness.
    """

    def __init__(self, violations, labels=None):
        self.violations = list(violations)
        lines = "; ".join(v.describe(labels) for v in self.violations)
        super().__init__(f"invalid similarity relation: {lines}")


class UnresolvedNameError(PossimError):
    def __init__(self, name: str, what: str = "proposition"):
        super().__init__(f"unresolved {what} {name!r}")
        self.name = name
        self.what = what


class TableError(PossimError):
    """A distribution table does not satisfy its defining bounds."""

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class IncompleteTableError(TableError):
    pass


class HypothesisViolationError(TableError):
    pass
