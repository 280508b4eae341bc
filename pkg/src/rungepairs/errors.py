"""Exception hierarchy shared by the library and the CLI.

Each exception carries the CLI exit code it maps to, so the command-line
front end never needs its own lookup table.
"""


class RungePairsError(Exception):
    exit_code = 1


class SpecParseError(RungePairsError, ValueError):
    exit_code = 2


class BoxTooSmall(RungePairsError, ValueError):
    exit_code = 2


class AsymmetricSpec(RungePairsError, ValueError):
    exit_code = 2


class GridMismatch(RungePairsError, ValueError):
    exit_code = 3


class NotNested(RungePairsError, ValueError):
    exit_code = 3


class PoleHit(RungePairsError, ZeroDivisionError):
    pass


class OnCurve(RungePairsError, ValueError):
    pass


class CycleLeavesDomain(RungePairsError, ValueError):
    pass


class NoCollar(RungePairsError, ValueError):
    pass


class NotBounded(RungePairsError, ValueError):
    pass


class NotDescending(RungePairsError, AssertionError):
    """The restriction map failed to carry relations into relations."""


class EquivalenceViolation(RungePairsError, AssertionError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotRunge(RungePairsError):
    exit_code = 4

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PathNotFound(RungePairsError):
    exit_code = 4


class PushBudgetExceeded(RungePairsError):
    """Truncation orders needed for the requested accuracy exceed the cap."""

    exit_code = 4
