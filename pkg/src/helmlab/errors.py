"""Exception hierarchy shared by all modules."""


class HelmlabError(Exception):
    """Base class; ``reason`` is the machine-readable tag used in run summaries."""

    reason = "error"


class InputError(HelmlabError, ValueError):
    reason = "input"


class RangeError(HelmlabError, ValueError):
    reason = "range"


class SingularityError(RangeError):
    reason = "singularity"


class RegimeError(HelmlabError, ValueError):
    reason = "regime"


class CompatibilityError(HelmlabError, ValueError):
    reason = "compatibility"


class CapabilityError(HelmlabError, ValueError):
    reason = "capability"


class DegenerateInputError(HelmlabError, ValueError):
    reason = "degenerate-input"


class PreconditionError(HelmlabError, ValueError):
    reason = "precondition"


class AccuracyError(HelmlabError, ArithmeticError):
    reason = "accuracy"


class TruncationError(AccuracyError):
    """Raised when an analytic tail bound exceeds the allowed truncation error."""

    reason = "truncation"

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class ConfigError(HelmlabError, ValueError):
    reason = "config"
