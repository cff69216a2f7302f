"""Exception types shared across the package.

Exit-code mapping used by the CLI: GapConditionError and other ValueErrors
are precondition violations (exit 2), DivergenceError is exit 3, I/O
failures are exit 4, verification failures are exit 1.
"""


class GapConditionError(ValueError):
    """Maximum sampling gap violates the reconstruction threshold."""

    def __init__(self, delta, threshold, k, sigma):
        self.delta = delta
        self.threshold = threshold
        self.k = k
        self.sigma = sigma
        super().__init__(
            f"maximum gap condition violated: delta={delta:.6g} >= "
            f"L={threshold:.6g} (k={k}, sigma={sigma:.6g})"
        )


class NotAFrameError(ValueError):
    """Empirical lower frame bound is numerically zero at this resolution."""


class DivergenceError(RuntimeError):
    """Iterative reconstruction stopped making progress."""

    def __init__(self, message, history=None):
        self.history = list(history) if history is not None else []
        super().__init__(message)


class SolverError(RuntimeError):
    """Eigenvalue solver failed to converge; carries the last iterate."""

    def __init__(self, message, last_value=None):
        self.last_value = last_value
        super().__init__(message)


class GenerationError(RuntimeError):
    """Random partition generation exhausted its retry budget."""
