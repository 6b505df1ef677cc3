"""Exception types shared across the simulator."""


class PopperSimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(PopperSimError, ValueError):
    """A configuration violates one of its invariants."""


class NumericalError(PopperSimError):
    """A numerical procedure could not produce a trustworthy result."""


class NullSelectionError(NumericalError):
    """Post-selection on an outcome that has (numerically) zero probability."""


class ResolutionError(NumericalError):
    """A wavefunction does not fit its grid (boundary tails or Nyquist bound)."""

    def __init__(self, message: str, suggested_grid=None):
        super().__init__(message)
        self.suggested_grid = suggested_grid
