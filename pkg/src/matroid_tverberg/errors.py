"""Exception types shared across the package."""


class MatroidTverbergError(Exception):
    """Base class for every error raised by this package."""


class UnknownElement(MatroidTverbergError):
    """An element id is not part of the matroid's ground set."""


class UnknownColor(MatroidTverbergError):
    """A color id is missing from the palette, or an index is uncolored."""


class MixedParents(MatroidTverbergError):
    """Sequence set-operations require operands rooted at the same sequence."""


class SeedInvalid(MatroidTverbergError):
    """A seed subsequence is not rainbow, not independent, or not contained in S."""


class LoopInInput(MatroidTverbergError):
    """The input sequence contains a loop; the solvers require non-loops."""


class PreconditionViolated(MatroidTverbergError):
    """The instance does not meet the documented preconditions of a solver."""


class InternalInvariantBroken(MatroidTverbergError):
    """A runtime invariant of the algorithm failed; this always indicates a bug."""


class NotABasis(MatroidTverbergError):
    """An argument that must be (or lie inside) a basis is not one."""


class BudgetExceeded(MatroidTverbergError):
    """A brute-force enumeration hit its configured budget."""


class InfeasibleRequest(MatroidTverbergError):
    """A random-instance request cannot be satisfied (e.g. length too small)."""


class ParseError(MatroidTverbergError):
    """Instance or partition text could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
