"""Exception hierarchy.

Each subclass maps to a distinct CLI exit code (see ``hopfrenorm.cli``).
"""


class HopfRenormError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParseError(HopfRenormError, ValueError):
    """Malformed graph, catalog, series or character document."""

    exit_code = 2


class GraphValidationError(ParseError):
    """A graph violates the phi^3 invariants (valence, connectivity, self-loops)."""


class DomainError(HopfRenormError, ValueError):
    """An operation was called outside its mathematical domain."""

    exit_code = 2


class CoverageError(HopfRenormError, KeyError):
    """A catalog or character does not cover the generators an operation needs."""

    exit_code = 3

    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message.
        return str(self.args[0]) if self.args else ""


class IncompleteCatalogError(CoverageError):
    """A subgraph or contraction has no generator in the catalog."""


class RecursionOrderError(CoverageError):
    """A lower-degree counterterm was needed but not yet computed."""


class ResourceLimitError(HopfRenormError):
    """A configured cap (pole order, vertex count) was exceeded."""

    exit_code = 4


class PrecisionError(ResourceLimitError):
    """Truncation order would drop below zero."""


class NotRenormalizableError(HopfRenormError):
    """The beta-function limit does not exist for a non-equisingular family."""

    exit_code = 5


class VerdictError(HopfRenormError):
    """A checked identity (reconstruction, flatness) failed."""

    exit_code = 5

    def __init__(self, message: str, report: object = None) -> None:
        super().__init__(message)
        self.report = report
