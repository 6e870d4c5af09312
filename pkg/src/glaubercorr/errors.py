"""Exception hierarchy shared by every module of the package."""


class GlauberCorrError(Exception):
    """Base class for all errors raised by glaubercorr."""


class InvalidMatrix(GlauberCorrError, ValueError):
    """Matrix is non-square, non-Hermitian, or has incompatible dimensions."""


class ConvergenceFailure(GlauberCorrError, ArithmeticError):
    """Jacobi iteration did not reach the off-diagonal threshold."""


class NotPositiveSemidefinite(GlauberCorrError, ValueError):
    pass


class InvalidParams(GlauberCorrError, ValueError):
    pass


class DegenerateNormalization(GlauberCorrError, ValueError):
    """m = 1 with p**n == 1: the odd superposition vanishes identically."""


class UnsupportedSize(GlauberCorrError, ValueError):
    pass


class InvalidChannel(GlauberCorrError, ValueError):
    pass


class InvalidState(GlauberCorrError, ValueError):
    pass


class UnestimableParameter(GlauberCorrError, ValueError):
    """Fisher information is zero, so no finite Cramer-Rao bound exists."""
