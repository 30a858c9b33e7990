from __future__ import annotations

from .constants import EXIT_BUDGET, EXIT_INPUT


class McflowError(Exception):
    """Base class for every error the library raises on bad input.

    Carries the CLI exit code and optional machine-readable details that the
    CLI folds into its JSON error object.
    """
    exit_code = EXIT_INPUT

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {"ok": False, "error": type(self).__name__, "message": self.message, **self.details}


class NetworkError(McflowError, ValueError):
    """Structural problem: unknown endpoint, duplicate id, k = 0, s = t."""


class DimensionError(McflowError, ValueError):
    pass


class RegionError(McflowError, ValueError):
    """Unsupported or inconsistent region (mixed variants, empty polygon)."""


class UnboundedRegionError(RegionError):
    pass


class DocumentError(McflowError, ValueError):
    """Network document could not be parsed; carries line/column or arc id."""


class FlowError(McflowError, ValueError):
    """Assignment does not cover the network, or local flows do not glue."""


class NotFullyDisjointError(NetworkError):
    pass


class DisconnectedError(NetworkError):
    pass


class NoPathError(NetworkError):
    pass


class NonReducibleError(McflowError, ValueError):
    pass


class InvalidParameterError(McflowError, ValueError):
    pass


class BudgetExceededError(McflowError, RuntimeError):
    exit_code = EXIT_BUDGET
