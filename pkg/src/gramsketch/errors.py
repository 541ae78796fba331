"""Exception hierarchy shared by all gramsketch modules."""


class GramSketchError(Exception):
    """Base class for all library errors."""


class DimensionError(GramSketchError):
    """Operands have incompatible or invalid shapes."""


class ParamError(GramSketchError):
    """A parameter is outside its documented domain."""


class NumericError(GramSketchError):
    """Non-finite values or a numerically impossible input."""


class NotPsdError(NumericError):
    """Matrix has an eigenvalue below the negative tolerance."""


class SymmetryError(NumericError):
    """Matrix is asymmetric beyond tolerance."""


class RankDeficientError(NumericError):
    """Matrix does not have full column rank."""


class SolverError(GramSketchError):
    """An inner solver hook failed."""


class FormatError(GramSketchError):
    """Malformed matrix file."""
