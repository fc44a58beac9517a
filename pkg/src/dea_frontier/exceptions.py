"""Exception hierarchy shared by the solver, the DEA models and the CLI."""


class DEAError(Exception):
    """Base class for every error raised by this package."""


class InputError(DEAError, ValueError):
    """Malformed input: dimension mismatch, bad values, unknown option."""


class DataError(InputError):
    """A dataset file or array violates the data invariants."""

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class OutsidePPSError(DEAError):
    """The evaluated point does not belong to the production possibility set."""


class NumericalFailure(DEAError):
    """The simplex method hit its iteration limit or lost numerical rank."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class DegeneratePlacementError(DEAError):
    """Clamping at zero removed the offset of a candidate artificial unit."""


class ConvergenceFailure(DEAError):
    """A corrective loop ran out of halvings while some units stayed broken."""

    def __init__(self, message, broken=(), partial=None):
        super().__init__(message)
        self.broken = list(broken)
        self.partial = partial
