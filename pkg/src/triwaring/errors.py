"""Exception hierarchy shared by every module of the package."""


class TriWaringError(Exception):
    """Base class for all errors raised by this package."""


class PolySyntaxError(TriWaringError, ValueError):
    """Polynomial text does not conform to the input grammar."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class NonzeroConstantTerm(TriWaringError, ValueError):
    """A polynomial was required to have zero constant term."""


class ZeroPolynomial(TriWaringError, ValueError):
    """A polynomial cancelled to zero where a nonzero one was required."""


class MissingAssignment(TriWaringError, KeyError):
    """Evaluation point does not cover every variable of a polynomial."""


class DimensionMismatch(TriWaringError, ValueError):
    pass


class ArityMismatch(TriWaringError, ValueError):
    pass


class OrderExceedsCap(TriWaringError):
    """The polynomial vanishes on every T_k checked so far."""

    def __init__(self, cap):
        super().__init__(f"polynomial vanishes identically on T_{cap + 1}; order exceeds cap {cap}")
        self.cap = cap


class ZeroPolynomialInput(TriWaringError, ValueError):
    """A nonvanishing search was asked to avoid an identically zero polynomial."""


class PivotZero(TriWaringError, ValueError):
    pass


class TargetZero(TriWaringError, ValueError):
    pass


class DegenerateSideForm(TriWaringError, ValueError):
    pass


class OrderOutOfRange(TriWaringError, ValueError):
    def __init__(self, order, n):
        super().__init__(f"construction needs 1 < r < n-1, got r={order}, n={n}")
        self.order = order
        self.n = n


class OrderMismatch(TriWaringError, ValueError):
    def __init__(self, order, n):
        super().__init__(f"corner-case construction needs r = n-2, got r={order}, n={n}")
        self.order = order
        self.n = n


class TargetNotInBand(TriWaringError, ValueError):
    pass


class ZeroOnRDiagonal(TriWaringError, ValueError):
    def __init__(self, positions):
        where = ", ".join(f"({s},{t})" for s, t in positions)
        super().__init__(f"target has zero entries on the r-diagonal at {where}")
        self.positions = list(positions)


class InternalVerificationFailure(TriWaringError, AssertionError):
    """A constructed witness failed exact re-evaluation; this is a bug."""
