"""Exception taxonomy for fracgreen.

Every failure mode raised by the library derives from FracGreenError so
callers can catch the whole family at once.  The CLI maps these onto exit
codes (see fracgreen.cli).
"""


class FracGreenError(Exception):
    """Base class for all fracgreen errors."""


class ParameterError(FracGreenError):
    """A model or solver parameter is outside its admissible range."""


class DomainError(FracGreenError):
    """A point lies outside the domain required by the operation."""


class SingularityError(FracGreenError):
    """Evaluation requested exactly on the kernel diagonal (x == y)."""


class QuadratureError(FracGreenError):
    """A quadrature rule could not be built or failed its self-check."""


class TruncationError(FracGreenError):
    """A truncated integral is not controllable under the stated decay."""


class DegenerateError(FracGreenError):
    """Geometry degenerated (empty cap, zero-measure region, ...)."""


class NonConvergenceError(FracGreenError):
    """An iterative solve failed to meet its tolerance.

    Carries the residual history so callers can diagnose or fall back.
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class ConfigError(FracGreenError):
    """A run configuration failed to load or validate (names the key path)."""


class UsageError(FracGreenError):
    """Malformed command-line invocation (unknown command, bad flags)."""
