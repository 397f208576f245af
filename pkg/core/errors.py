"""
Error types.

Every failure raised by the library derives from QCLabError so the
runner can map it to an exit code in one place.
"""

from typing import Any, Optional


class QCLabError(Exception):
    """Base class for all library errors."""


class SpecParseError(QCLabError):
    """The manifold spec text is not valid JSON or breaks the schema."""


class SpecValidationError(QCLabError):
    """The manifold spec parsed but violates a structural invariant."""


class InternalConsistencyError(QCLabError):
    """A geometric invariant of the model failed (a bug, not bad input)."""


class NotOnWallError(QCLabError):
    """A point was expected to lie on a given wall."""


class MalformedWordError(QCLabError):
    """A group word has an invalid syllable sequence or literal."""


class IdentityWordError(QCLabError):
    """An operation that needs a nontrivial element got the identity."""


class NotMorseError(QCLabError):
    """
    A generator fixes a vertex of the dual tree.

    Attributes:
        witness (Any): The offending word, kept for replay.
    """

    def __init__(self, message: str, witness: Optional[Any] = None) -> None:
        super().__init__(message)
        self.witness = witness


class OracleBudgetError(QCLabError):
    """The distance oracle would exceed its wall or node budget."""


class NoCertifiedPathError(QCLabError):
    """No candidate quasi-geodesic could be certified."""


class UnimodularityError(QCLabError):
    """An integer matrix is not square or has determinant other than +-1."""


class PeriodicMonodromyError(QCLabError):
    """Some power of the monodromy fixes a nonzero lattice vector."""


class InconsistentGeneratorsError(QCLabError):
    """A generator list is empty or mixes lattice dimensions."""


class UsageError(QCLabError):
    """Command line arguments do not describe a runnable experiment."""
