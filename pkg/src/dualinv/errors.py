"""Exception hierarchy shared by the real and dual inverse routines."""


class DualInvError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(DualInvError, ValueError):
    """Operands have incompatible or unsupported shapes."""


class InverseNotExist(DualInvError, ArithmeticError):
    """A requested generalized inverse does not exist for the input.

    ``detail`` carries whatever evidence the raising routine had at hand:
    a singular value, a projector residual or a full existence certificate.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class GroupInverseNotExist(InverseNotExist):
    pass


class CoreInverseNotExist(InverseNotExist):
    pass


class DmpgiNotExist(InverseNotExist):
    pass


class DggiNotExist(InverseNotExist):
    pass


class DcgiNotExist(InverseNotExist):
    pass


class InconsistentCertificate(DualInvError):
    """Equivalent existence tests disagreed, i.e. the input sits near a threshold."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class InternalFormulaMismatch(DualInvError):
    """Two independent computations of the same quantity disagree (a bug signal)."""


class PreconditionError(DualInvError, ValueError):
    """Input violates a documented precondition (e.g. symmetry)."""
