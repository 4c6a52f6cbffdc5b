"""Exception hierarchy shared by the library and the CLI."""


class OptomechError(Exception):
    """Base class for every error raised by this package."""


class BadDimension(OptomechError, ValueError):
    pass


class DimensionMismatch(OptomechError, ValueError):
    pass


class DimensionTooLarge(OptomechError, ValueError):
    pass


class NotHermitian(OptomechError, ValueError):
    pass


class BadOccupation(OptomechError, ValueError):
    pass


class DegenerateCoupling(OptomechError, ValueError):
    """The analytic model needs g_cm > 0 (eta is a 0/0 limit otherwise)."""


class OffResonance(OptomechError, ValueError):
    pass


class UnstableIntegration(OptomechError, RuntimeError):
    """Raised when a run leaves the accepted trace/positivity envelope.

    The samples recorded up to (and including) the offending one are kept on
    ``series`` so callers can still write them out.
    """

    def __init__(self, message, series=None):
        super().__init__(message)
        self.series = series


class ConfigError(OptomechError, ValueError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class UnknownPreset(ConfigError):
    pass


class PlotError(OptomechError, ValueError):
    pass


class MissingColumn(PlotError):
    pass


class MalformedCSV(PlotError):
    pass
