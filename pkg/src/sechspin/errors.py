"""Exception hierarchy shared across the package."""


class SechSpinError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SechSpinError, ValueError):
    """A configuration value violates a domain constraint."""


class ConfigParseError(SechSpinError, ValueError):
    """A config file or data file could not be parsed."""


class UnreachableAngleError(ConfigError):
    """A requested rotation angle cannot be produced by a single pulse."""


class AccuracyError(SechSpinError, ArithmeticError):
    """A numerical result failed its accuracy diagnostic."""


class NonReturnError(AccuracyError):
    """The pulse left population in the excited level; no phase can be read."""


class FitError(SechSpinError, ValueError):
    """Base class for trace-fitting failures."""


class UnfittableTraceError(FitError):
    """The trace is degenerate (zero or negative mean level)."""


class FitWindowError(FitError):
    """Too few samples fall inside the fit window."""


class IllPosedFitError(FitError):
    """The normal equations are too ill-conditioned to trust."""


class DegenerateReferenceError(FitError):
    """The reference fit has no usable visibility to normalize against."""
