"""Exception types raised across the package."""


class InvalidArgument(ValueError):
    """An input is non-finite or outside its validity range.

    ``key`` names the offending configuration field when there is one.
    """

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class DegenerateImmersion(ValueError):
    """The first-derivative columns of a jet are (nearly) linearly dependent."""


class PreconditionViolation(ValueError):
    """A documented hypothesis of an operation does not hold at the given input."""


class OutOfDomain(ValueError):
    """Evaluation point lies outside the sampled parameter domain."""


class SolverDomainError(RuntimeError):
    """Q could not be evaluated at some grid node."""

    def __init__(self, message, node=None, s=None):
        super().__init__(message)
        self.node = node
        self.s = s


class Diverged(RuntimeError):
    """The fixed-point iteration failed to reach its tolerance."""

    def __init__(self, message, residual_history=()):
        super().__init__(message)
        self.residual_history = list(residual_history)
