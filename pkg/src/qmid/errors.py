"""Exception types shared across the package."""


class QmidError(ValueError):
    """Base class for domain errors raised by this package."""


class SpectrumError(QmidError):
    """Raised when a singular-value spectrum violates its invariants."""


class FamilyError(QmidError):
    """Raised for invalid (k, l) family parameters."""


class UndefinedEfficiencyError(QmidError):
    """Raised when the efficiency I/(1-F) is requested at F = 1."""


class NoTangentPointError(QmidError):
    """Raised when the tangent construction has no interior solution (d = 2)."""


class SweepError(QmidError):
    """Raised for invalid sweep parameters (step size, grid resolution)."""


class CurvatureUnreliableError(QmidError):
    """Raised when finite differencing cannot resolve the curvature sign."""


class IncompleteMeasurementError(QmidError):
    """Raised when a measurement's completeness residual exceeds tolerance."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"completeness residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )
