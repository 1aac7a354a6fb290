"""Exception hierarchy shared by every module."""


class VilenkinError(Exception):
    """Base class for all library errors."""


class InvalidBasisError(VilenkinError, ValueError):
    pass


class ResolutionTooLargeError(VilenkinError, ValueError):
    pass


class OutOfRangeError(VilenkinError, IndexError):
    pass


class UndefinedMeanError(VilenkinError, ValueError):
    pass


class InvalidExponentError(VilenkinError, ValueError):
    pass


class IncompatibleOperandsError(VilenkinError, ValueError):
    pass


class OracleSizeError(VilenkinError, ValueError):
    """Raised when a quadratic-cost oracle is asked to run above its cutoff."""


class InvalidAtomError(VilenkinError, ValueError):
    pass


class ConfigError(VilenkinError, ValueError):
    """Bad experiment configuration (CLI exit code 1)."""


class CheckFailedError(VilenkinError, AssertionError):
    """An invariant checked by an experiment did not hold (CLI exit code 2)."""
