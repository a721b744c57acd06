"""Exception hierarchy shared by the library and the command line."""


class FuzzFTAError(Exception):
    """Base class. ``category`` and ``exit_code`` drive CLI error reporting."""

    category = "error"
    exit_code = 1


class ParseError(FuzzFTAError):
    category = "parse"
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class ValidationError(FuzzFTAError):
    category = "validation"
    exit_code = 2

    def __init__(self, message, diagnostics=()):
        self.diagnostics = tuple(diagnostics)
        super().__init__(message)


class MethodError(FuzzFTAError):
    """The requested method cannot handle this attribution kind or structure."""

    category = "method"
    exit_code = 3


class DagRejectedError(MethodError):
    category = "dag-rejected"


class BoundExceededError(FuzzFTAError):
    category = "bound-exceeded"
    exit_code = 4
