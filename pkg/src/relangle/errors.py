"""Exception types shared across the toolkit."""

__all__ = ["CapacityError", "ImpossibleOutcomeError", "ConsistencyError"]


class CapacityError(ValueError):
    """A dense-matrix request exceeds the supported dimension cap."""


class ImpossibleOutcomeError(ValueError):
    """A Bayesian update was requested for an outcome of probability zero."""


class ConsistencyError(RuntimeError):
    """An internal consistency check failed (e.g. probabilities not summing to one)."""
