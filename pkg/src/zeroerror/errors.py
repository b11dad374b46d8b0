"""Exception hierarchy shared by all modules.

The CLI maps ``ValidationError`` (and its subclasses) to exit status 2 and
``ComputationError`` subclasses to exit status 3.
"""


class ValidationError(ValueError):
    """Malformed input: bad arguments, invalid tables, unparsable files."""


class ArgumentError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SizeError(ValidationError):
    """A construction or problem exceeds a configured size cap."""


class ComputationError(RuntimeError):
    pass


class InexactError(ComputationError):
    """Search budget exhausted before optimality was proven.

    ``best`` carries the best bound found so far and ``witness`` the
    corresponding object (independent set, coloring or cover).
    """

    def __init__(self, message, best=None, witness=None):
        super().__init__(message)
        self.best = best
        self.witness = witness


class SolverError(ComputationError):
    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap
