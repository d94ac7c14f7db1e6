"""Exception types shared across kstarlab."""


class DomainError(ValueError):
    """Argument outside the domain of the requested function."""


class ResourceError(RuntimeError):
    """Request would exceed the memory or enumeration budget."""
