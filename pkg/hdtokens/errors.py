"""Exception types raised by hdtokens."""

from typing import Optional


class HdqError(Exception):
    """Base class for every error raised by the package."""


class HdqSyntaxError(HdqError, ValueError):
    """Malformed `.hdq` text."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(f"{where}{message}")


class AutomatonError(HdqError, ValueError):
    """Structurally invalid automaton (non-total, bad discount, wrong class...)."""


class WordError(HdqError, ValueError):
    """Malformed word literal or word incompatible with the automaton mode."""


class EvaluationError(HdqError, ValueError):
    """A run or word value is undefined."""


class OutOfScopeError(HdqError):
    """The automaton class has no supported decision procedure."""


class UnsupportedRouteError(HdqError):
    """No resolver can be extracted from the verdict's route."""


class SolverError(HdqError, RuntimeError):
    """Internal solver failure, e.g. an iteration cap was hit."""


class ResolverError(HdqError):
    """A resolver was asked for a move it does not define."""

    def __init__(self, message: str, memory: Optional[object] = None):
        self.memory = memory
        super().__init__(message)


class OracleLimitError(HdqError):
    """Brute-force arena exceeded its configured size guard."""


class GenConfigError(HdqError, ValueError):
    """Random generator bounds that cannot produce an automaton."""
