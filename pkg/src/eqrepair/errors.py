"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations

from typing import Sequence


class EqRepairError(Exception):
    """Base class for all engine errors."""


class KernelError(EqRepairError):
    pass


class TypeError_(KernelError):
    """Ill-typed term.  ``path`` is the child-index path to the offending node."""

    def __init__(self, message: str, path: Sequence[int] = ()):
        self.path = tuple(path)
        self.message = message
        where = f" at [{';'.join(map(str, self.path))}]" if self.path else ""
        super().__init__(f"{message}{where}")

    def at(self, step: int) -> "TypeError_":
        """Prefix the path with ``step`` as the error propagates outward."""
        err = type(self)(self.message, (step, *self.path))
        return err


# The public name; the trailing underscore variant avoids shadowing the builtin
# inside this module only.
TypeError = TypeError_


class UnknownName(KernelError):
    pass


class UnknownInductive(UnknownName):
    pass


class DuplicateName(KernelError):
    pass


class PositivityViolation(KernelError):
    pass


class UniverseError(KernelError):
    pass


class ArityMismatch(EqRepairError):
    pass


class SynthesisFailed(EqRepairError):
    def __init__(self, criterion: str, detail: str = ""):
        self.criterion = criterion
        super().__init__(f"{criterion}: {detail}" if detail else criterion)


class TransformFailed(EqRepairError):
    def __init__(self, reason: str, path: Sequence[int] = (), hint: str | None = None):
        self.reason = reason
        self.path = tuple(path)
        self.hint = hint
        msg = reason
        if self.path:
            msg += f" at [{';'.join(map(str, self.path))}]"
        if hint:
            msg += f"; {hint}"
        super().__init__(msg)


class TerminationGuardTriggered(TransformFailed):
    pass


class DependencyError(EqRepairError):
    pass


class ReplayFailed(EqRepairError):
    def __init__(self, step: str, goal: object, detail: str = ""):
        self.step = step
        self.goal = goal
        msg = f"{step} failed on goal {goal}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ParseError(EqRepairError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"{line}:{column}: {message}")


class ConfigurationError(EqRepairError):
    """A configuration is malformed, missing or fails validation."""


class MappingOutOfRange(EqRepairError):
    pass
