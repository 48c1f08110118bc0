"""Exception types raised across the package."""

import numpy as np


class GraphSampError(Exception):
    """Base class for all package errors."""


class NumericalError(GraphSampError, np.linalg.LinAlgError):
    """A numerical precondition failed (rank, definiteness, convergence)."""


class NonSymmetric(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class NotInvertible(NumericalError):
    """The selected rows of the band basis do not have full column rank."""


class SpanExhausted(NumericalError):
    """Not enough selectable nodes to reach the requested sample count."""


class ValidationError(GraphSampError, ValueError):
    """Invalid user input (shapes, ranges, configuration)."""


class InvalidProbability(ValidationError):
    pass


class NodeOutOfRange(ValidationError):
    pass


class NegativeWeight(ValidationError):
    pass


class InvalidSupport(ValidationError):
    pass


class InvalidBandwidth(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class ZeroSignal(ValidationError):
    pass


class TooManySamples(ValidationError):
    pass


class DegenerateWeights(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class ParseError(ValidationError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
