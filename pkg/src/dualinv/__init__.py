"""Generalized inverses of dual matrices ``A + eps*B`` with ``eps**2 = 0``."""

from .dualginv import (DualGinvResult, ExistenceCertificate, InverseKind,
                       SpecialForm, SymmetricReport, classify_special_forms,
                       dcgi, dggi, dmpgi, dmpgi_exists, dual_index_is_one,
                       mpdgi, symmetric_identities, verify_axioms)
from .dualnum import (DualMatrix, DualScalar, angle_norm, approx_eq,
                      dual_matmul, dual_norm_squared, dual_transpose)
from .dualsolve import DualSolveResult, residual_norm, solve
from .errors import (CoreInverseNotExist, DcgiNotExist, DggiNotExist,
                     DimensionError, DmpgiNotExist, GroupInverseNotExist,
                     InconsistentCertificate, InternalFormulaMismatch,
                     InverseNotExist, PreconditionError)
from .realginv import (HartwigDecomposition, Tolerance, core_inverse,
                       group_inverse, hartwig_decompose, index_is_one,
                       numerical_rank, pinv)

__version__ = "0.1.0"
