"""Exception types raised by angularcp."""


class AngularDomainError(ValueError):
    """An angle, ratio or parameter lies outside its admissible range."""


class DegeneracyError(ArithmeticError):
    """A numerical quantity the procedure depends on is degenerate."""


class UndefinedMeanError(DegeneracyError):
    """The mean resultant length is (numerically) zero, so no mean direction exists."""


class SingularDispersionError(DegeneracyError):
    """The curved dispersion matrix cannot be inverted."""

    def __init__(self, det: float, eps: float):
        self.det = det
        self.eps = eps
        super().__init__(f"curved dispersion matrix is singular: det={det:.3e} <= {eps:.1e}")


class DegenerateVarianceError(DegeneracyError):
    """The Q-sequence is constant, leaving no variability for the CUSUM."""
