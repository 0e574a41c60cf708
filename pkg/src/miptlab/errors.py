"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the documented domain of a function."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class DivergentRegimeError(DomainError):
    """Parameter set lies in the regime where the long-range sum diverges
    (2*alpha <= 1 in one dimension); the quantity has no finite value."""


class ResourceLimitError(ValueError):
    """Requested computation exceeds a hard resource bound (e.g. the
    total-qubit limit of the exact trajectory simulator)."""


class StabilityError(RuntimeError):
    """Momentum-space kernel is non-positive somewhere, so it cannot be
    inverted to a real-space interaction."""


class ConvergenceError(RuntimeError):
    """Iterative solver failed to reach its tolerance within the allowed
    number of iterations.  Carries the final residual when available."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
