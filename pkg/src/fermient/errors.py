"""Exception types shared across the package."""


class FermientError(Exception):
    """Base class for all package errors."""


class DomainError(FermientError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(FermientError, MemoryError):
    """A dense object would exceed the configured size caps."""


class DegeneracyError(FermientError, RuntimeError):
    """A thermal sum would depend on an arbitrary basis inside a degenerate eigenspace."""
