"""Exception types shared across the package."""


class TrackPathsError(Exception):
    pass


class GraphError(TrackPathsError, ValueError):
    pass


class ModulatorError(TrackPathsError, ValueError):
    """The supplied modulator does not have the property its kind requires."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PathCapExceeded(TrackPathsError):
    """Raised by path enumeration once more than ``cap`` paths exist.

    This is a signal rather than a failure; callers decide what to do.
    """

    def __init__(self, cap):
        super().__init__(f"more than {cap} simple paths")
        self.cap = cap


class InstanceFormatError(TrackPathsError, ValueError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column


class SolverInvariantError(TrackPathsError, AssertionError):
    """An internal invariant failed; indicates a bug rather than bad input."""
