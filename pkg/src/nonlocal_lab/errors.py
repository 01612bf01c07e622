class DomainError(ValueError):
    """Argument outside the domain where the quantity is defined."""


class ConvergenceError(RuntimeError):
    """A numerical routine could not reach its requested tolerance."""
