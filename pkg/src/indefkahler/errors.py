"""Exception hierarchy shared by all modules."""


class KahlerError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(KahlerError, ValueError):
    pass


class UnrealizableSignature(KahlerError, ValueError):
    """The requested signature class cannot be hosted by the space."""


class DegeneratePlane(KahlerError, ValueError):
    pass


class NullVector(KahlerError, ValueError):
    pass


class InvalidTensor(KahlerError, ValueError):
    """A tensor failed one of the Kaehler curvature symmetries."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RankNotStabilized(KahlerError, RuntimeError):
    """Sampled constraint rank still grows; more samples are needed."""

    def __init__(self, message, rank=None, half_rank=None):
        super().__init__(message)
        self.rank = rank
        self.half_rank = half_rank


class PreconditionError(KahlerError, ValueError):
    pass


class ParseError(KahlerError, ValueError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
