class CmGreenError(Exception):
    """
    Base of every domain failure. `exit_code` is what the CLI returns when the
    error escapes a command: 1 for a failed verification, 2 for bad input.
    """

    exit_code = 1


class InputError(CmGreenError):
    exit_code = 2


# exact algebra
class NonInvertibleLead(CmGreenError):
    pass


class OddOrderSqrt(CmGreenError):
    pass


class CompositionOrderViolation(CmGreenError):
    pass


class TruncationExhausted(CmGreenError):
    def __init__(self, exponent: int, trunc: int, what: str = "series"):
        self.exponent = exponent
        self.trunc = trunc
        super().__init__(f"coefficient of z^{exponent} requested but {what} is only known below z^{trunc}")


class UnknownWeight(CmGreenError):
    pass


class DivisionByZeroSeries(CmGreenError):
    pass


# cycles
class DegenerateCurve(InputError):
    pass


class NonProperIntersection(CmGreenError):
    pass


class UnvalidatedEndo(InputError):
    pass


class SingularSystem(CmGreenError):
    pass


# numerics
class PrecisionUnreachable(CmGreenError):
    pass


class PoleAtI(InputError):
    pass


class CoincidentPoints(InputError):
    pass


class DomainError(InputError):
    pass


class UnsupportedTower(DomainError):
    """Intersection points would need a field tower deeper than one quadratic step."""


class NonConvergent(CmGreenError):
    pass


class OrbitCollision(InputError):
    pass


class NotInBoundaryLattice(InputError):
    pass


class PathTooClosePole(CmGreenError):
    pass


class DecompositionMissing(InputError):
    pass
