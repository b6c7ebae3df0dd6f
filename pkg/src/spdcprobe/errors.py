"""Exception types raised by the package."""


class SpdcProbeError(ValueError):
    """Base class for all domain errors."""


class NonFinite(SpdcProbeError):
    pass


class NotHermitian(SpdcProbeError):
    pass


class NotDensityMatrix(SpdcProbeError):
    """Trace or positivity outside tolerance."""


class DimensionMismatch(SpdcProbeError):
    pass


class GridTooCoarse(SpdcProbeError):
    pass


class WindowTooNarrow(SpdcProbeError):
    """The angular window truncates the difference-angle support."""


class DegenerateVariance(SpdcProbeError):
    pass


class DegenerateDenominator(SpdcProbeError):
    pass


class OutOfRange(SpdcProbeError):
    pass
