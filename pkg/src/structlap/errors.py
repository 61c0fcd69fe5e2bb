"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures without a
lookup table: 2 parse, 3 budget, 4 structural precondition, 5 degenerate input.
"""


class StructlapError(Exception):
    exit_code = 1


class InvalidGraph(StructlapError, ValueError):
    exit_code = 2


class GraphParseError(InvalidGraph):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotConnected(StructlapError):
    exit_code = 4


class NotATree(StructlapError):
    exit_code = 4


class PathNotInTree(StructlapError):
    exit_code = 4


class InvalidPermutation(StructlapError, ValueError):
    exit_code = 2


class NoDivergingTree(StructlapError):
    exit_code = 4


class GenerationFailed(StructlapError):
    exit_code = 4


class SupportViolation(StructlapError, ValueError):
    exit_code = 4


class ConvergenceFailure(StructlapError, ArithmeticError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class Disconnected(StructlapError):
    exit_code = 4


class DegenerateLambda(StructlapError):
    """An eigenvalue that must be simple is repeated at the working tolerance."""

    exit_code = 5

    def __init__(self, message, value=None, vector=None):
        super().__init__(message)
        self.value = value
        self.vector = vector


class DegenerateLambda2(DegenerateLambda):
    pass


class DegenerateFiedler(StructlapError):
    exit_code = 5


class ZeroPolynomial(StructlapError, ValueError):
    pass


class XNotARoot(StructlapError, ValueError):
    pass


class ScheduleExhausted(StructlapError):
    exit_code = 3


class BudgetExhausted(StructlapError):
    exit_code = 3

    def __init__(self, message, best_gap=None):
        super().__init__(message)
        self.best_gap = best_gap
