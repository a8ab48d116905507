"""Exception and warning types shared across the package."""


class InvalidArgumentError(ValueError):
    """A value violates a basic precondition (non-finite, wrong shape, ...)."""


class SingularElementError(ZeroDivisionError):
    """Inversion of a non-invertible element was requested."""


class DomainError(ValueError):
    """A point or spectrum falls outside the domain of definition."""


class GeometryError(ValueError):
    """A contour or surface cannot be built with the required clearance."""


class ContractViolationError(ValueError):
    """An input silently failed a symmetry contract it asserted."""


class NumericError(RuntimeError):
    """An iterative numeric routine failed to produce a usable answer."""


class AccuracyError(ArithmeticError):
    """A computed result misses its accuracy target by too much."""


class AccuracyWarning(UserWarning):
    """Quadrature stopped refining before reaching its tolerance."""
