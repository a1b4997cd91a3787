class DomainError(ValueError):
    """An input lies outside the region where a formula is defined."""


class ConvergenceError(RuntimeError):
    """A numerical solve failed to reach its tolerance."""
