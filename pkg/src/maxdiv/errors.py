"""Exception types shared across the package."""


class MaxdivError(Exception):
    """Base class for all package errors."""


class InputError(MaxdivError, ValueError):
    """Invalid data: bad matrix entries, malformed distribution, bad file."""


class ParseError(InputError):
    """Input text rejected, with a location when one is known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)


class PreconditionError(MaxdivError, ValueError):
    """Operation preconditions violated: asymmetry, size cap, support escape."""


class NumericalError(MaxdivError, RuntimeError):
    """Numerical machinery failed: LP iteration cap, consistency violations."""
