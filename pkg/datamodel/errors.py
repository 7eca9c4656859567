"""errors

Exception hierarchy for the workbench.  Every error raised by the datamodel derives from WorkbenchError
and from the closest builtin so callers that only know about ValueError & co. keep working.
"""


class WorkbenchError(Exception):
    pass


class InvalidArgumentError(WorkbenchError, ValueError):
    pass


class ValidationError(WorkbenchError, ValueError):
    pass


class QuantizationError(ValidationError):
    pass


class PromiseError(ValidationError):
    pass


class UndecidableError(WorkbenchError, ValueError):
    pass


class IndeterminateResultError(WorkbenchError, ArithmeticError):
    pass


class BudgetExceededError(WorkbenchError, RuntimeError):
    pass


class UnsupportedSizeError(WorkbenchError, ValueError):
    pass


class InconsistencyError(WorkbenchError, RuntimeError):
    pass
