"""Exception types shared across the library."""


class GroupLabError(Exception):
    """Base class for library-specific errors."""


class EvaluationBlocked(GroupLabError):
    """A word evaluation needed a product or inverse not derivable from the given cells."""


class NotSquareForm(GroupLabError):
    """The clopen's constraints do not cover a full {1..k} x {1..k} block."""


class LimitExceeded(GroupLabError):
    """A configured size or budget limit was exceeded."""


class IdentityElement(GroupLabError):
    """The operation is undefined for the identity label."""


class TrivialGroup(GroupLabError):
    """The operation requires a group of order at least 2."""


class NotInClosure(GroupLabError):
    """The target label is not in the required closure."""


class LengthMismatch(GroupLabError):
    """Paired label sequences have different lengths."""


class UnknownConstant(GroupLabError):
    """A word constant is not a label of the given structure."""


class StrategyFault(GroupLabError):
    """A strategy emitted an illegal or malformed move during a run."""

    def __init__(self, mover: str, step: int, reason: str):
        super().__init__(f"{mover} faulted at step {step}: {reason}")
        self.mover = mover
        self.step = step
        self.reason = reason


class NotYourTurn(GroupLabError):
    """A move was submitted out of turn."""


class SessionNotFound(GroupLabError):
    """No session with the requested id exists."""


class IllegalMove(GroupLabError):
    """A move rejected by the legality check was applied anyway."""


class GoalBlocked(GroupLabError):
    """A scheduled goal cannot be realized on this turn."""
