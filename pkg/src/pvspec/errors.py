"""Exception hierarchy shared by every module.

Each class name matches the error name reported by the command-line front end.
"""


class PvspecError(Exception):
    """Base class for all library errors."""


class DivisionByZero(PvspecError, ZeroDivisionError):
    pass


class DescriptorMismatch(PvspecError, TypeError):
    pass


class Reducible(PvspecError, ValueError):
    pass


class NotSquarefree(PvspecError, ValueError):
    pass


class DenominatorVanishes(PvspecError, ValueError):
    pass


class LeadingCoefficientVanishes(PvspecError, ValueError):
    pass


class NotMonic(PvspecError, ValueError):
    pass


class BadDimensions(PvspecError, ValueError):
    pass


class NoCyclicVectorFound(PvspecError, RuntimeError):
    pass


class Singular(PvspecError, ValueError):
    pass


class ZeroOperator(PvspecError, ValueError):
    pass


class CapExceeded(PvspecError, ValueError):
    pass


class ZeroFunction(PvspecError, ValueError):
    pass


class PolesNotCovered(PvspecError, ValueError):
    pass


class NotGenusOne(PvspecError, ValueError):
    pass


class PointNotOnCurve(PvspecError, ValueError):
    pass


class NotPrincipal(PvspecError, ValueError):
    pass


class DegenerateCurve(PvspecError, ValueError):
    pass


class PrecisionExhausted(PvspecError, RuntimeError):
    """Series precision hit the hard cap before the requested term was known."""


class UnsupportedDivisor(PvspecError, ValueError):
    """A divisor touches places of degree > 1 that the class map cannot handle."""


class NeedsHigherExtension(PvspecError):
    """An irreducible factor of degree >= 3 blocks the computation.

    ``completed`` holds whatever partial result was available and
    ``factors`` the blocking polynomials.
    """

    def __init__(self, message, factors=(), completed=None):
        super().__init__(message)
        self.factors = list(factors)
        self.completed = completed


class TorsionInconclusive(PvspecError):
    """A torsion question could not be settled within the search bound."""

    def __init__(self, message, point=None, bound=None):
        super().__init__(message)
        self.point = point
        self.bound = bound


class ParseError(PvspecError, ValueError):
    def __init__(self, message, text="", pos=0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.column = col
