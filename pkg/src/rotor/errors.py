"""Exception hierarchy shared by all rotor modules."""


class RotorError(Exception):
    """Base class for every error raised by the package."""


class MapFormatError(RotorError):
    """Malformed map document. ``position`` is a character offset when known."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at char {position})"
        super().__init__(message)
        self.position = position


class MissingUnitEndpoint(MapFormatError):
    pass


class InvalidMapError(RotorError):
    """Raised when a downstream operation receives a map that failed validation."""

    def __init__(self, report):
        failed = ", ".join(c.code for c in report.failures)
        super().__init__(f"map failed validation: {failed}")
        self.report = report


class RefinementDiverged(RotorError):
    pass


class NonContiguousWeights(RotorError):
    pass


class NoCycle(RotorError):
    pass


class LengthCapExceeded(RotorError):
    pass


class NonPrimitive(RotorError):
    pass


class NoConvergence(RotorError):
    pass


class BracketFailure(RotorError):
    pass


class DegenerateEntry(RotorError):
    pass


class ZeroNotSimple(RotorError):
    pass


class HorizonCapExceeded(RotorError):
    pass


class EpsilonTooLarge(RotorError):
    pass
