"""Exception types shared across the package."""


class FractentError(Exception):
    """Base class for all package errors."""


class PinchedBoundary(FractentError):
    """A boundary loop passes through the same lattice vertex twice."""


class RegionParseError(FractentError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class LSystemError(FractentError):
    pass


class LSystemParseError(LSystemError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class WordTooLarge(LSystemError):
    pass


class PatternNotFound(LSystemError):
    pass


class PathNotClosed(LSystemError):
    pass


class CapExceeded(FractentError):
    """Requested generation exceeds the configured size cap."""


class ConstructionUnavailable(FractentError):
    pass


class OutsideFormulaDomain(FractentError):
    pass


class NonIntegerPrediction(FractentError):
    """A closed-form predictor produced a non-integer at integer n."""


class MarginTooSmall(FractentError):
    pass


class TooManySpins(FractentError):
    pass


class NotInGroup(FractentError):
    pass


class GroupTooLarge(FractentError):
    pass


class SeparabilityViolated(FractentError):
    pass


class InsufficientScales(FractentError):
    pass


class BaseMismatch(FractentError):
    pass
