"""Exception hierarchy for convexhyper.

Exit-code mapping used by the CLI: validation/parse problems are exit 2,
infeasible geometric requests are exit 3, I/O failures are exit 4.
"""


class ConvexHyperError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(ConvexHyperError, ValueError):
    """A parameter violates a documented precondition."""


class InvalidBodyError(ConvexHyperError, ValueError):
    """A body representation violates its invariants (empty vertex list, ...)."""


class DimensionMismatchError(InvalidArgumentError):
    """Two bodies or a body and a direction live in different dimensions."""


class RepresentationError(ConvexHyperError, TypeError):
    """An operation got a body representation it cannot work on."""


class NotStrictlyConvexError(ConvexHyperError):
    """Support maximizer is a face, not a point.

    Carries the offending face's vertex set in ``face_vertices``.
    """

    def __init__(self, message, face_vertices=None):
        super().__init__(message)
        self.face_vertices = face_vertices


class EmptyResultError(ConvexHyperError):
    """A cut or intersection produced the empty set."""


class InfeasibleBudgetError(ConvexHyperError):
    """Desymmetrization cannot satisfy its constraints within the budget.

    ``min_displacement`` reports the smallest achievable displacement found.
    """

    def __init__(self, message, min_displacement=None):
        super().__init__(message)
        self.min_displacement = min_displacement


class ParseError(ConvexHyperError, ValueError):
    """Body JSON does not match the schema.

    ``path`` is a JSON-pointer-style location of the offending element.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path


class ValidationError(ParseError):
    """Schema was well-formed but a node invariant failed."""
