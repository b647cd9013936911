"""Exception types shared across the package."""


class WarpconvError(Exception):
    """Base class for all library errors."""


class ConfigError(WarpconvError):
    """Invalid configuration value or file."""


class SpaceMismatchError(WarpconvError):
    """Operands live on different spaces."""


class GridDomainError(WarpconvError):
    """Grid violates a domain requirement (origin node, odd size, ...)."""


class ExtrapolationError(WarpconvError):
    """The epsilon extrapolation did not converge.

    Carries the per-epsilon norm sequence so the caller can inspect the
    failure instead of guessing from a bare message.
    """

    def __init__(self, message, residual, epsilons, per_epsilon_norms):
        super().__init__(message)
        self.residual = float(residual)
        self.epsilons = list(epsilons)
        self.per_epsilon_norms = list(per_epsilon_norms)


class QuadratureRangeError(WarpconvError):
    """Quadrature box too small relative to the integrand decay."""

    def __init__(self, message, boundary_ratio):
        super().__init__(message)
        self.boundary_ratio = float(boundary_ratio)


class DegenerateSamplesError(WarpconvError):
    """Sample set empty or entirely degenerate for a bound fit."""


class InfeasibleBoundError(WarpconvError):
    """A relative-bound inequality cannot be satisfied within the cap.

    ``sample_index`` points at the violating state.
    """

    def __init__(self, message, sample_index, required_b):
        super().__init__(message)
        self.sample_index = int(sample_index)
        self.required_b = float(required_b)


class BoundaryContaminationError(WarpconvError):
    """Input state has too much weight near a lattice boundary."""
