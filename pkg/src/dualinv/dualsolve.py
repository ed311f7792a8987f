"""Linear dual equations ``A_hat x_hat = b_hat``.

Given a dual generalized inverse ``G`` of ``A_hat`` every vector of the form

    x_hat = G b_hat + (I - G A_hat) w_hat

is returned through its representative at ``w_hat = 0`` and the projector
``I - G A_hat``.  With a {1}-inverse (DMPGI, DGGI, DCGI) this is the general
solution of a consistent system; with a {1,3}-inverse (DMPGI, or DCGI,
whose ``A_hat G`` is symmetric) it is the dual analog of the least-squares
solution of an inconsistent one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dualginv import InverseKind, compute
from .dualnum import DualMatrix, angle_norm
from .errors import DimensionError
from .realginv import DEFAULT_TOL, Tolerance, mag


@dataclass(frozen=True, eq=False)
class DualSolveResult:
    particular: DualMatrix
    projector: DualMatrix
    consistent: bool
    error_norm: float
    inverse_kind: InverseKind

    def solution(self, w: DualMatrix) -> DualMatrix:
        """Member of the solution family for the free vector ``w``."""
        return self.particular + self.projector @ w


def residual_norm(Ah: DualMatrix, x: DualMatrix, b: DualMatrix) -> float:
    """Dual error norm of ``A_hat x_hat - b_hat``."""
    if x.shape != (Ah.shape[1], 1) or b.shape != (Ah.shape[0], 1):
        raise DimensionError(
            f"cannot form A x - b with A {Ah.shape}, x {x.shape}, b {b.shape}")
    return angle_norm(Ah @ x - b)


def solve(Ah: DualMatrix, b: DualMatrix, kind: InverseKind = InverseKind.DMPGI,
          tol: Tolerance | None = None) -> DualSolveResult:
    """Particular solution ``G b``, projector ``I - G A`` and error norm.

    ``kind`` selects the dual inverse used as ``G``; the DMPGI is the
    default because it serves consistent and inconsistent systems alike.
    The system is declared consistent when the error norm is below
    ``eq_tol`` times a magnitude scale of ``A_hat``, ``G`` and ``b_hat``.

    Raises
    ------
    InverseNotExist
        Propagated from the inverse routine when ``G`` does not exist.
    DimensionError
        When ``b`` is not a column conforming with ``A_hat``.
    """
    tol = DEFAULT_TOL if tol is None else tol
    kind = InverseKind(kind)
    if not b.is_vector or b.shape[0] != Ah.shape[0]:
        raise DimensionError(f"right-hand side {b.shape} does not conform to {Ah.shape}")
    G = compute(Ah, kind, tol).inverse
    x = G @ b
    P = DualMatrix.identity(Ah.shape[1]) - G @ Ah
    err = residual_norm(Ah, x, b)
    scale = mag(Ah.real, Ah.dual) * mag(G.real, G.dual) * mag(b.real, b.dual)
    consistent = bool(err <= tol.eq_tol * scale * np.sqrt(Ah.shape[0]))
    return DualSolveResult(x, P, consistent, err, kind)
