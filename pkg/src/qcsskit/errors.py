"""Exception hierarchy shared by all qcsskit modules."""


class QcssError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(QcssError, ValueError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class ReduciblePolynomial(QcssError, ValueError):
    pass


class NotPrimitive(QcssError, ValueError):
    pass


class FieldTooLarge(QcssError, ValueError):
    pass


class InvalidElement(QcssError, ValueError):
    pass


class LogOfZero(QcssError, ValueError):
    pass


class NotCoprime(QcssError, ValueError):
    pass


class InvalidParams(QcssError, ValueError):
    pass


class InvalidDivisor(InvalidParams):
    pass


class CharacteristicTooSmall(InvalidParams):
    pass


class DegenerateOptimum(QcssError, ValueError):
    """delta_opt is zero (M == K), so the tightness ratio is undefined."""


class LengthMismatch(QcssError, ValueError):
    pass


class ShapeMismatch(QcssError, ValueError):
    pass


class IndexOutOfRange(QcssError, IndexError):
    pass


class TooFewVectors(QcssError, ValueError):
    pass


class BudgetExceeded(QcssError):
    """Raised instead of silently truncating an exhaustive scan."""

    def __init__(self, estimate, budget, what="work"):
        super().__init__(
            f"{what} estimate {estimate:.3g} exceeds budget {budget:.3g}; raise the cap to proceed"
        )
        self.estimate = estimate
        self.budget = budget


class FamilyTooLarge(BudgetExceeded):
    def __init__(self, M, cap):
        QcssError.__init__(self, f"family has M={M} matrices, materialization cap is {cap}")
        self.estimate = M
        self.budget = cap
        self.M = M
        self.cap = cap


class ParseError(QcssError, ValueError):
    pass
