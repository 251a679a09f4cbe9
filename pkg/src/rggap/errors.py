"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain or validity window."""


class DegenerateInputError(ValueError):
    """Coincident points or collapsed intervals where distinct ones are required."""


class ConvergenceError(RuntimeError):
    """An iterative evaluation did not reach its tolerance."""


class EquilibrationError(RuntimeError):
    """A simulation has not relaxed far enough towards its scaling limit."""
