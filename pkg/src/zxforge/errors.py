"""Exception hierarchy shared by all zxforge modules."""


class ZxForgeError(Exception):
    pass


class NonNormalized(ZxForgeError, ValueError):
    pass


class BadProbabilities(ZxForgeError, ValueError):
    pass


class DimensionMismatch(ZxForgeError, ValueError):
    pass


class ParseError(ZxForgeError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IndexOutOfRange(ZxForgeError, IndexError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TooLarge(ZxForgeError, ValueError):
    pass


class UnsupportedGate(ZxForgeError, ValueError):
    pass


class MalformedDiagram(ZxForgeError, ValueError):
    pass


class NoMatch(ZxForgeError, ValueError):
    pass


class SoundnessViolation(ZxForgeError, AssertionError):
    pass


class StepLimitExceeded(ZxForgeError, RuntimeError):
    pass


class TypeMismatch(ZxForgeError, TypeError):
    pass


class ShapeError(ZxForgeError, ValueError):
    pass


class DegenerateSupport(ZxForgeError, ValueError):
    pass


class ZeroState(ZxForgeError, ValueError):
    pass
