"""Exception hierarchy shared by every engine in the package."""


class NCSusyError(Exception):
    """Base class for all errors raised by :mod:`ncsusy`."""


class MismatchedTruncation(NCSusyError, ValueError):
    """Two operands carry different truncation orders."""


class SingularLeadingCoefficient(NCSusyError, ZeroDivisionError):
    """A series without an invertible constant term was inverted."""


class NonPositiveLeadingCoefficient(NCSusyError, ValueError):
    """A series square root was requested for a non-positive constant term."""


class NegativeDiscriminant(NCSusyError, ValueError):
    """The square root inside the gauge-field coefficient went negative."""


class NotAnEigenstate(NCSusyError):
    """``P psi`` is not proportional to ``psi`` within tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class GaugeMismatch(NCSusyError, ValueError):
    """A gauge-specific construction was called at the wrong gauge parameter."""


class UnsupportedShape(NCSusyError, ValueError):
    """An operator does not have the first-order shape the kernel solver expects."""


class NonlinearInput(NCSusyError, ValueError):
    """A gauge field passed to the first-order SW map is not linear."""


class GridTooCoarse(NCSusyError, ValueError):
    """The finite-difference grid does not resolve the magnetic length."""


class ConvergenceFailure(NCSusyError, RuntimeError):
    """The tridiagonal eigensolver did not converge."""


class ConfigError(NCSusyError, ValueError):
    """Invalid run configuration."""
