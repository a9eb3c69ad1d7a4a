"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A structure violates one of its invariants; the message names it."""


class UnsupportedPresentationError(ValidationError):
    """An infinite presentation falls outside the decidable cases."""


class DomainError(ValueError):
    """An operation was applied outside its domain (e.g. shifting an
    empty terminal path, or the cocycle of the zero element)."""
