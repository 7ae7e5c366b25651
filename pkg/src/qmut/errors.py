"""Exception hierarchy shared by every qmut module."""


class QMutError(Exception):
    """Base class for all errors raised by qmut."""


class InvalidArgument(QMutError, ValueError):
    pass


class InvalidCircuit(QMutError, ValueError):
    pass


class InvalidInstruction(QMutError, ValueError):
    pass


class InvalidPosition(QMutError, IndexError):
    pass


class PlaceholderNotFound(QMutError, LookupError):
    pass


class AmbiguousPlaceholder(QMutError, LookupError):
    pass


class InvalidSubstitution(QMutError, ValueError):
    pass


class UnknownGate(QMutError, KeyError):
    def __str__(self) -> str:
        # KeyError quotes its argument; keep the plain message.
        return str(self.args[0]) if self.args else ""


class ArityMismatch(QMutError, ValueError):
    pass


# Operator-level failures. MutationError subclasses trigger operator
# reselection inside the generation loop.
class MutationError(QMutError):
    pass


class IllegalTarget(MutationError):
    pass


class SingletonClass(MutationError):
    pass


class NoAttributeFreedom(MutationError):
    pass


class RetryExhausted(QMutError, RuntimeError):
    pass


class InconsistentRecords(QMutError, ValueError):
    pass


class PlaceholderPresent(QMutError, ValueError):
    pass


class TooManyQubits(QMutError, ValueError):
    pass


class OracleIncomplete(QMutError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class NoDifference(QMutError, ValueError):
    pass


class LoadError(QMutError, OSError):
    """A mutant file could not be read.

    ``stage`` names the step that failed: ``"read"``, ``"gzip"``, ``"json"``
    or ``"validate"``.
    """

    def __init__(self, message: str, stage: str, path=None):
        super().__init__(message)
        self.stage = stage
        self.path = path

    def __str__(self) -> str:
        where = f"{self.path}: " if self.path is not None else ""
        return f"{where}[{self.stage}] {self.args[0]}"


class UnsupportedQasm(QMutError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line

    def __str__(self) -> str:
        if self.line is None:
            return self.args[0]
        return f"line {self.line}: {self.args[0]}"
