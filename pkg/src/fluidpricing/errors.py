"""Exception types shared across the package."""


class FluidPricingError(Exception):
    """Base class for all package errors."""


class SingularMatrixError(FluidPricingError):
    """A matrix that must be invertible is singular."""


class NotNegativeDefiniteError(FluidPricingError):
    """B + B^T is not negative definite, so revenue is not strictly concave."""


class NotConcaveError(NotNegativeDefiniteError):
    """A fluid problem was posed with a non-concave objective."""


class QPSolverError(FluidPricingError):
    """The active-set solver failed to terminate (iteration cap hit)."""


class GridSizeError(FluidPricingError):
    """The brute-force oracle was asked for a dimension it cannot enumerate."""


class ParseError(FluidPricingError):
    """A configuration document is not syntactically valid."""


class ValidationError(FluidPricingError):
    """A value violates a structural invariant; the message names the key."""


class InsufficientDataError(FluidPricingError):
    """Not enough points for the requested fit."""


class EpisodeError(FluidPricingError):
    """A policy or solver failure inside an episode, tagged with the step."""

    def __init__(self, step, message):
        super().__init__(f"step {step}: {message}")
        self.step = step
