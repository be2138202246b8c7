"""Exception taxonomy shared across the library and mapped to CLI exit codes."""


class CCSketchError(Exception):
    """Base class for all ccsketch errors."""


class ConfigurationError(CCSketchError, ValueError):
    """Invalid configuration (k = 0, gap out of range, bad seed, ...)."""


class DomainError(CCSketchError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class StreamIndexError(CCSketchError, IndexError):
    """Stream index outside the declared domain."""


class IncompatibleSketchError(CCSketchError, ValueError):
    """Sketches with differing configurations cannot be combined."""


class NonPositiveMinimumError(CCSketchError, ArithmeticError):
    """Sample minimum is not positive: non-strict-turnstile data, an empty
    stream, or catastrophic cancellation."""


class DegenerateInputError(CCSketchError, ValueError):
    """Input carries no mass (all-zero vector, empty stream)."""


class InfeasibleRegimeError(CCSketchError, ValueError):
    """Requested (epsilon, gap) combination is outside the regime where the
    tail bounds / sample-size formula are defined."""


class NoRootError(CCSketchError, ArithmeticError):
    """Level-crossing target lies below the kernel's infimum."""


class NumericError(CCSketchError, ArithmeticError):
    """A numeric procedure failed to converge to its tolerance."""


class FormatError(CCSketchError, ValueError):
    """Malformed stream file or sketch file."""


class TurnstileViolationError(CCSketchError, ValueError):
    """Final frequencies went negative: the stream is not strict-turnstile."""
