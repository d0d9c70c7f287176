"""Exception types raised across the package."""


class FuzzyDonskerError(Exception):
    """Base class for all package errors."""


class EmptyInput(FuzzyDonskerError, ValueError):
    pass


class DimensionMismatch(FuzzyDonskerError, ValueError):
    pass


class EmptyIntersection(FuzzyDonskerError, ValueError):
    """Half-plane constraints admit no common point."""


class UnboundedIntersection(FuzzyDonskerError, ValueError):
    """Half-plane normals do not positively span the plane."""


class NotNested(FuzzyDonskerError, ValueError):
    """Alpha-cuts fail the non-increasing support check."""


class GridMismatch(FuzzyDonskerError, ValueError):
    pass


class InvalidSpec(FuzzyDonskerError, ValueError):
    pass


class NoClosedForm(FuzzyDonskerError):
    pass


class DegenerateVariance(FuzzyDonskerError, ArithmeticError):
    pass


class InsufficientSamples(FuzzyDonskerError, IndexError):
    pass


class NonPositiveVariance(FuzzyDonskerError, ValueError):
    pass


class InvalidConfig(FuzzyDonskerError, ValueError):
    pass
