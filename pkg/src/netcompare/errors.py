"""Exception hierarchy.

``InputError`` covers anything the caller can fix (bad files, bad
parameters); ``NumericError`` signals that a computation failed to
converge or produced non-finite values.  The CLI maps them to exit
codes 2 and 3.
"""


class NetCompareError(Exception):
    pass


class InputError(NetCompareError, ValueError):
    pass


class EdgeListError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyGraphError(InputError):
    pass


class ParameterError(InputError):
    pass


class NumericError(NetCompareError, ArithmeticError):
    pass
