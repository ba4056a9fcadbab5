"""Exception hierarchy.

Every exception carries the process exit code the CLI maps it to:
1 for hypothesis/precondition failures, 2 for parse errors, 3 for
resource caps.
"""


class HFError(Exception):
    exit_code = 1


class MalformedInput(HFError):
    exit_code = 2


class DisconnectedGraph(HFError):
    pass


class InvalidWeight(HFError):
    pass


class SingularForm(HFError):
    pass


class HypothesisFailure(HFError):
    """Graph is not negative definite, has too many bad vertices, or |det| != 1."""


class LengthMismatch(HFError):
    pass


class NotCharacteristic(HFError):
    pass


class IndexOutOfRange(HFError):
    pass


class IllegalPush(HFError):
    def __init__(self, step: int, vertex: int, detail: str = ""):
        self.step = step
        self.vertex = vertex
        msg = f"illegal push at step {step}: vertex {vertex}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class StepLimitExceeded(HFError):
    exit_code = 3


class StateCapExceeded(HFError):
    exit_code = 3


class NotStabilized(HFError):
    exit_code = 3


class GradingMismatch(HFError):
    pass


class InvalidN(HFError):
    pass


class InvalidIndex(HFError):
    pass
