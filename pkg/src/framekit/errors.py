class FrameKitError(Exception):
    """Base class for all framekit errors."""


class DimensionError(FrameKitError, ValueError):
    """Empty inputs or mismatched vector lengths."""


class ContractError(FrameKitError, ValueError):
    """An operation's precondition does not hold for the given input."""


class NotAFrameError(ContractError):
    """The vectors do not span the ambient space."""


class ResourceLimitError(FrameKitError, RuntimeError):
    """An exponential enumeration would exceed the configured cap."""
