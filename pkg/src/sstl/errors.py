"""Exception hierarchy shared by every module."""


class SstlError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(SstlError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class DialectError(SstlError, ValueError):
    """A formula was handed to an operation that expects another dialect."""


class TraceFormatError(SstlError, ValueError):
    pass


class ModelError(SstlError, ValueError):
    """Malformed model text or a run-time domain violation inside a model."""


class ConfigurationError(SstlError, ValueError):
    """Formula atoms that cannot be evaluated against a model."""


class UnboundObligation(SstlError, KeyError):
    """A guard atom was evaluated without its entry position in scope."""


class ResourceLimit(SstlError):
    def __init__(self, message: str, states_explored: int):
        super().__init__(f"{message} after exploring {states_explored} states")
        self.states_explored = states_explored
