"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class GraphCodesError(Exception):
    exit_code = 1


class InvalidParameterError(GraphCodesError, ValueError):
    exit_code = 2


class DisconnectedGraphError(InvalidParameterError):
    pass


class NoKResolvingSetError(InvalidParameterError):
    """The graph admits no k-resolving set for the requested k."""


class UnsupportedKError(InvalidParameterError):
    pass


class ParametersBelowThresholdError(InvalidParameterError):
    """Raised when the partition covering construction does not apply yet."""


class ConstructionUnavailableError(GraphCodesError):
    exit_code = 2


class NotKResolvingError(GraphCodesError):
    exit_code = 3

    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class InstanceTooLargeError(GraphCodesError):
    exit_code = 4
