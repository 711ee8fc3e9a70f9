"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the region an operation is defined on."""


class ValidationError(ValueError):
    """Input data violates a structural requirement (missing vertices,
    boundary values, conflicting duplicates, malformed config)."""


class ContractionError(ValidationError):
    """The vertical scaling field is not a contraction (sup norm >= 1)."""


class HypothesisError(ValueError):
    """An analytic result was requested outside its hypothesis."""


class CapacityError(RuntimeError):
    """A requested computation exceeds the configured resource budget."""


class PreconditionError(ValueError):
    """An operation was called with arguments outside its contract."""
