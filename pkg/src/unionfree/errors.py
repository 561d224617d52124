"""Exception hierarchy shared by every module."""


class UnionFreeError(Exception):
    """Base class for all library errors."""


class ParseError(UnionFreeError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapabilityError(UnionFreeError):
    """The request is beyond the configured desk-scale limits."""


class ContractError(UnionFreeError, ValueError):
    """A documented precondition was violated by the caller."""


class RegimeError(ContractError):
    """Parameters fall outside the regime an operation is defined for."""


class InfeasibleError(UnionFreeError, ValueError):
    """A generator was asked for something that cannot exist."""
