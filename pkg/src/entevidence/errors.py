"""Exception hierarchy shared by all modules."""


class EntEvidenceError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(EntEvidenceError, ValueError):
    """Subsystem dimensions do not match an operator or vector."""


class NotHermitianError(EntEvidenceError, ValueError):
    pass


class ValidationError(EntEvidenceError, ValueError):
    """A state, weight list, basis or constraint failed validation."""


class PositivityError(ValidationError):
    """A candidate density matrix is not positive semidefinite."""


class MatrixTooLargeError(EntEvidenceError, ValueError):
    pass


class ConvergenceError(EntEvidenceError, RuntimeError):
    """An iterative routine stopped before meeting its tolerance."""


class InconclusiveError(EntEvidenceError):
    """The PPT criterion cannot decide separability in these dimensions."""


class InfeasibleConstraintsError(EntEvidenceError):
    """No density matrix reproduces the supplied expectation values."""


class ScenarioParseError(EntEvidenceError, ValueError):
    """A scenario document is malformed.

    ``context`` names the offending field path (e.g. ``constraints[2].value``)
    and ``line`` carries the JSON line number when the error comes from the
    decoder.
    """

    def __init__(self, message, context=None, line=None):
        self.context = context
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if context:
            where.append(context)
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
