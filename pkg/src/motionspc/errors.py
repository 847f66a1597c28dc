"""Exception hierarchy for the motionspc toolchain."""


class MotionSpcError(Exception):
    """Base class for all toolchain errors."""


class InvalidTaskCode(MotionSpcError):
    pass


class MissingLandmark(MotionSpcError):
    pass


class EmptyStream(MotionSpcError):
    pass


class StreamTooShort(MotionSpcError):
    pass


class EmptySeries(MotionSpcError):
    pass


class DegenerateCovariance(MotionSpcError):
    pass


class InsufficientData(MotionSpcError):
    pass


class DimensionMismatch(MotionSpcError):
    pass


class InvalidShape(MotionSpcError):
    pass


class LengthMismatch(MotionSpcError):
    pass


class ZeroVariance(MotionSpcError):
    pass


class MissingClass(MotionSpcError):
    pass


class ParseError(MotionSpcError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SchemaVersionError(ParseError):
    pass


class SerializationError(MotionSpcError):
    pass


class InvalidSpec(MotionSpcError):
    pass


class FrameOutOfRange(MotionSpcError):
    pass
