class SpanExcessError(Exception):
    """Base class for toolkit errors."""


class ScopeError(SpanExcessError, ValueError):
    """Input is larger than an exhaustive routine is allowed to handle."""


class GraphError(SpanExcessError, ValueError):
    pass


class Graph6Error(SpanExcessError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class ConvergenceError(SpanExcessError, ArithmeticError):
    """An iterative eigen-solver hit its iteration cap.

    ``bracket`` is an interval guaranteed to contain the wanted eigenvalue.
    """

    def __init__(self, message, bracket):
        super().__init__(f"{message}; best bracket [{bracket[0]:.12g}, {bracket[1]:.12g}]")
        self.bracket = bracket


class NoRootError(SpanExcessError, ArithmeticError):
    pass
