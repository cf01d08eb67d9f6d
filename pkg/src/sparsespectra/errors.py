"""Exception types shared across the package."""


class SparseSpectraError(Exception):
    """Base class for all package errors."""


class DomainError(SparseSpectraError, ValueError):
    """A numeric argument is outside its mathematical domain."""


class ShapeError(SparseSpectraError, ValueError):
    """A matrix argument has an unacceptable shape."""


class ContractError(SparseSpectraError):
    """An input violates a documented precondition."""


class ConvergenceError(SparseSpectraError):
    """An iterative solver exhausted its iteration budget."""


class ResourceError(SparseSpectraError):
    """A request exceeds the configured resource limits."""


class ConfigError(SparseSpectraError):
    """A run configuration is malformed or out of range.

    ``line`` is the 1-based line number in the config text when the
    error is attributable to a specific line, else None.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
