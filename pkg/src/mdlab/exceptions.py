"""Exception hierarchy for mdlab."""


class MDLabError(Exception):
    """Base class for all errors raised by mdlab."""


class ValuationError(MDLabError, ValueError):
    """A value table does not describe a valid almost-monotone valuation."""


class NotNormalized(ValuationError):
    pass


class ChainViolation(ValuationError):
    """The monotone chain (spike removed) decreases at ``index``."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"monotone chain violated at index {index}")


class BadSpikeIndex(ValuationError):
    pass


class IndexOutOfRange(MDLabError, IndexError):
    pass


class BadIndex(MDLabError, ValueError):
    pass


class MismatchedM(MDLabError, ValueError):
    pass


class MismatchedEps(MDLabError, ValueError):
    pass


class EmptyRange(MDLabError, ValueError):
    pass


class FullRange(MDLabError, ValueError):
    """The range contains every allocation, so no gap instance exists."""


class GridTooLarge(MDLabError, ValueError):
    pass


class ScaleTooLarge(MDLabError, ValueError):
    pass
