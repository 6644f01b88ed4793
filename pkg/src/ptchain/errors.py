"""Exception hierarchy shared by all modules."""


class PtchainError(Exception):
    """Base class for library errors."""


class ValidationError(PtchainError, ValueError):
    """Invalid model parameters or arguments."""


class ComputationError(PtchainError, ArithmeticError):
    """A numerical procedure failed or produced an inconsistent result."""


class UnsupportedError(PtchainError, NotImplementedError):
    """The requested configuration is outside what the library handles."""


class DimensionLimitError(ComputationError, ValueError):
    """A matrix would exceed the configured dimension limit."""
