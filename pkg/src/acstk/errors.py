"""Exception types shared across the toolkit.

Two failure classes are distinguished everywhere: inputs that violate a
documented contract (bad JSON, non-antisymmetric brackets, J^2 != -I, a
parameter out of range) raise ValidationError, while computations that are
well-posed but numerically impossible (singular frame change, deformation
outside the chart, division blowup in a patch entry) raise NumericalError.
The CLI maps these to distinct exit codes.
"""


class AcstkError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(AcstkError):
    """An input violates a documented contract."""


class NumericalError(AcstkError):
    """A well-posed computation failed numerically."""
