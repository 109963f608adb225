"""Exception hierarchy.

Two families matter to callers: :class:`InvalidInput` (bad parameters, maps
to CLI exit code 2) and :class:`NumericalFailure` (a computation that should
have worked did not, exit code 3).
"""


class DegenerationError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(DegenerationError, ValueError):
    pass


class NumericalFailure(DegenerationError, ArithmeticError):
    pass


# exact_linalg
class RankDeficient(NumericalFailure):
    pass


class ResidualTooLarge(NumericalFailure):
    pass


# lattice
class NotUpperHalfPlane(InvalidInput):
    pass


class DegenerateLattice(InvalidInput):
    pass


# hodge
class InvalidPeriodPoint(InvalidInput):
    pass


class NotIsotropicAgainstW0(InvalidInput):
    pass


# mhs
class NotUnipotent(InvalidInput):
    pass


class NotConstant(NumericalFailure):
    pass


class WrongDimension(NumericalFailure):
    pass


class DegenerateLine(NumericalFailure):
    pass


# carlson
class NotPrimitive(InvalidInput):
    pass


class DegenerateF1(NumericalFailure):
    pass


# degeneration
class InvalidBoundaryPoint(InvalidInput):
    pass


class OutsideConvergence(InvalidInput):
    pass


class NonIntegerRatio(NumericalFailure):
    pass


# cycle
class UnexpectedTopology(NumericalFailure):
    pass
