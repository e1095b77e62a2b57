"""Exception and warning types shared by every module."""


class QFourierError(Exception):
    """Base class for all errors raised by qfourier."""


class PoleProximityError(QFourierError, ValueError):
    """An argument lies within ``pole_guard`` of a pole."""


class ZeroArgumentError(QFourierError, ValueError):
    pass


class NonConvergentError(QFourierError, ArithmeticError):
    """A series failed to reach its tail tolerance."""


class NonIntegrableError(QFourierError, ValueError):
    """A skeleton is not absolutely q^2-integrable on its window."""


class OutOfStripError(QFourierError, ValueError):
    pass


class InvalidNuError(QFourierError, ValueError):
    pass


class UnsupportedDistributionError(QFourierError, TypeError):
    pass


class WindowError(QFourierError, ValueError):
    """A lattice window is empty, too small, or mismatched."""


class ConvergenceWarning(UserWarning):
    """A truncated lattice sum has tails above ``series_tol``."""
