"""Exception types raised by the numerical core and the physics layers."""


class NotHermitianError(ValueError):
    """Input matrix violates the Hermiticity tolerance."""


class NoConvergenceError(RuntimeError):
    """Eigensolver failed to converge."""


class StepTooLargeError(ValueError):
    """Propagation step violates the ||H||*dt bound."""


class LengthMismatchError(ValueError):
    """Paired sequences have different lengths."""


class NonMonotonicGridError(ValueError):
    """Grid abscissae are not strictly ascending."""


class BadDimensionError(ValueError):
    """Operator has the wrong shape for the requested embedding."""


class DegenerateBandError(ArithmeticError):
    """Band gap below threshold; curvature formula diverges."""


class DegenerateOnSurfaceError(ArithmeticError):
    """A degeneracy lies on (or too close to) the integration sphere."""


class DegenerateStartError(ArithmeticError):
    """Ground state at the start of a ramp is degenerate."""


class RangeTooNarrowError(ValueError):
    """Scan window does not cover all predicted degeneracy locations."""


class BoundaryDegeneracyError(ArithmeticError):
    """A degeneracy sits too close to the enclosure sphere surface."""


class UnknownParameterError(ValueError):
    """Parameter name not recognised by the sweep."""
