"""Exception hierarchy shared by all convseq modules."""


class ConvseqError(Exception):
    """Base class. CLI maps these to exit code 2 unless marked internal."""

    exit_code = 2


class RangeError(ConvseqError, ArithmeticError):
    """Value left the binary64 range or produced NaN."""


class ConstructionError(ConvseqError, ValueError):
    pass


class DomainError(ConvseqError, ValueError):
    pass


class UnknownCatalogEntry(ConvseqError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown catalog entry"


class ParamError(ConvseqError, ValueError):
    pass


class ArityError(ConvseqError, ValueError):
    pass


class DivisionByZeroLeadingCoefficient(ConvseqError, ZeroDivisionError):
    pass


class InsufficientData(ConvseqError, ValueError):
    pass


class DegenerateError(ConvseqError, ValueError):
    pass


class PreconditionError(ConvseqError, ValueError):
    """A hypothesis of the steering system does not hold; the message names it."""


class SingularMatrix(ConvseqError, ArithmeticError):
    pass


class LengthError(ConvseqError, ValueError):
    pass


class ConfigError(ConvseqError, ValueError):
    pass
