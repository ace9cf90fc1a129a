"""Exception types shared across the package."""
from __future__ import annotations


class HprcError(Exception):
    """Base class for package errors."""


class DomainError(HprcError, ValueError):
    """Argument outside the domain of a cut function or hyperedge."""


class DegenerateCutError(HprcError, ValueError):
    """Cut is empty or the whole vertex set."""


class UnsupportedRankError(HprcError, ValueError):
    """Exhaustive routine requested on a hyperedge or graph that is too large."""


class InvalidSeedError(HprcError, ValueError):
    """Seed vector is not mu-orthogonal to the all-ones vector."""


class UndefinedObjectiveError(HprcError, ValueError):
    """Cut has zero correlation with the seed."""


class InvalidFlowError(HprcError, ValueError):
    """Hyperedge flow violates conservation."""


class DegenerateEmbeddingError(HprcError, ValueError):
    """Embedding has zero variance or no admissible cut."""


class NoShiftError(HprcError, ValueError):
    """No common shift satisfies the interval constraints."""


class ParseError(HprcError, ValueError):
    """Malformed hypergraph or solution file."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}"
            if col is not None:
                where += f", col {col}"
            where += ": "
        super().__init__(where + message)
