"""Exception types shared across the toolkit.

Two broad families matter for callers (and for CLI exit codes): validation
errors mean the inputs violate a precondition; numerical errors mean a
well-posed computation failed to converge or certify.
"""


class ToolkitError(Exception):
    """Base class for all toolkit exceptions."""


class ValidationError(ToolkitError):
    """Inputs violate a documented precondition."""


class NumericalError(ToolkitError):
    """A numerically well-posed computation failed (tolerances, genericity)."""


class NotHermitianError(ValidationError):
    """Operator expected to be Hermitian is not, beyond tolerance."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible shapes or carrier dimensions."""


class InvalidParameterError(ValidationError):
    """A scalar parameter is out of its documented range."""


class SourceMismatchError(ValidationError):
    """Two representations do not share the same group or algebra."""


class InvalidShellError(ValidationError):
    """Bloch-shell radii are not 0 <= r_lo < r_hi < 1."""


class NotCPTPError(ValidationError):
    """Channel is not completely positive and trace preserving within tolerance."""


class DimensionTooLargeError(ValidationError):
    """Requested carrier exceeds the documented desk-scale cap."""


class PrerequisiteFailedError(ValidationError):
    """A check that this operation builds on did not pass."""


class DecompositionFailedError(NumericalError):
    """Isotypic decomposition did not certify after the redraw budget."""
