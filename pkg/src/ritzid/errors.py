"""Exception hierarchy. Everything raised on purpose derives from RitzIdError."""


class RitzIdError(Exception):
    pass


class NonFiniteError(RitzIdError, ValueError):
    pass


class TooFewSamplesError(RitzIdError, ValueError):
    pass


class DimensionMismatchError(RitzIdError, ValueError):
    pass


class InvalidParameterError(RitzIdError, ValueError):
    pass


class ConfigInvalidError(InvalidParameterError):
    pass


class DegenerateRhsError(RitzIdError):
    pass


class InvalidIntervalError(RitzIdError, ValueError):
    pass


class BoundsTooTightError(RitzIdError, ValueError):
    pass


class DegenerateSpectrumError(RitzIdError):
    pass


class ClusteringDegenerateError(RitzIdError):
    pass


class TooLargeError(RitzIdError, ValueError):
    pass


class NotSymmetricError(RitzIdError, ValueError):
    pass


class ZeroVarianceError(RitzIdError, ValueError):
    pass


class NoGapFoundError(RitzIdError):
    pass


class InvalidSpecError(RitzIdError, ValueError):
    pass


class DataFormatError(RitzIdError, ValueError):
    """Malformed input file. ``row``/``col`` are 1-based when known."""

    def __init__(self, message, row=None, col=None):
        loc = ""
        if row is not None:
            loc = f"row {row}" + (f", column {col}" if col is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)
        self.row = row
        self.col = col
