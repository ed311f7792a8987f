"""Generalized inverses of real square matrices.

Everything here is driven by one singular-value cutoff policy (``Tolerance``)
so that rank tests, the index-one test and the invertibility test on ``K``
in the Hartwig decomposition all reach the same verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (CoreInverseNotExist, DimensionError, GroupInverseNotExist,
                     InternalFormulaMismatch)

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    rank_tol
        Relative singular-value cutoff; a singular value counts when it
        exceeds ``rank_tol * max(rows, cols) * reference`` where the
        reference is the largest singular value of the matrix at hand.
    eq_tol
        Matrix-equality tolerance, applied to max-abs residuals after
        multiplying by a magnitude scale of the operands.  Defaults to
        ``100 * rank_tol``.
    """

    rank_tol: float = 64 * _EPS
    eq_tol: float | None = None

    def __post_init__(self):
        if self.eq_tol is None:
            object.__setattr__(self, "eq_tol", 100.0 * self.rank_tol)
        if not (self.rank_tol > 0 and self.eq_tol > 0):
            raise ValueError("rank_tol and eq_tol must be strictly positive")


DEFAULT_TOL = Tolerance()


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def _square(A, name="A"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {A.shape}")
    return A


def mag(*arrays) -> float:
    """``max(1, largest absolute entry)`` over the given arrays."""
    m = 1.0
    for a in arrays:
        a = np.asarray(a)
        if a.size:
            m = max(m, float(np.abs(a).max()))
    return m


def rank_cutoff(shape, reference: float, tol: Tolerance | None = None) -> float:
    return _tol(tol).rank_tol * max(shape) * reference


def numerical_rank(A, tol: Tolerance | None = None, reference: float | None = None) -> int:
    """Number of singular values above the cutoff.

    ``reference`` replaces the largest singular value as the cutoff scale;
    it is used when a matrix has a natural scale other than its own norm
    (for instance ``A @ A`` is measured against ``|A|**2``).
    """
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    ref = s[0] if reference is None else reference
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_cutoff(A.shape, ref, tol)))


def pinv(A, tol: Tolerance | None = None) -> np.ndarray:
    """Moore-Penrose inverse from a thin SVD with the shared cutoff."""
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m))
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0.0:
        return np.zeros((n, m))
    keep = s > rank_cutoff(A.shape, s[0], tol)
    return (Vt[keep].T / s[keep]) @ U[:, keep].T


def index_is_one(A, tol: Tolerance | None = None) -> bool:
    """True iff ``rank(A @ A) == rank(A)`` under the shared cutoff."""
    A = _square(A)
    if A.size == 0:
        return True
    smax = np.linalg.svd(A, compute_uv=False)[0]
    return numerical_rank(A @ A, tol, reference=smax ** 2) == numerical_rank(A, tol)


@dataclass(frozen=True, eq=False)
class HartwigDecomposition:
    """``A = U [[S K, S L], [0, 0]] U^T`` with ``S = diag(sigma)``.

    ``U`` is orthogonal, ``sigma`` holds the nonzero singular values in
    descending order and ``K K^T + L L^T = I_r``.
    """

    U: np.ndarray
    sigma: np.ndarray
    K: np.ndarray
    L: np.ndarray
    r: int

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def reconstruct(self) -> np.ndarray:
        top = self.sigma[:, None] * np.hstack([self.K, self.L])
        M = np.vstack([top, np.zeros((self.n - self.r, self.n))])
        return self.U @ M @ self.U.T

    def split(self, M):
        """Blocks ``(M1, M2, M3, M4)`` of ``U^T M U`` partitioned at ``r``."""
        T = self.U.T @ np.asarray(M, dtype=float) @ self.U
        r = self.r
        return T[:r, :r], T[:r, r:], T[r:, :r], T[r:, r:]

    def assemble(self, M1, M2, M3, M4) -> np.ndarray:
        """Inverse of :meth:`split`: ``U [[M1, M2], [M3, M4]] U^T``."""
        return self.U @ np.block([[M1, M2], [M3, M4]]) @ self.U.T

    def k_is_invertible(self, tol: Tolerance | None = None) -> tuple[bool, float]:
        """Smallest singular value of ``K`` and whether it clears the cutoff.

        ``K`` is a row block of a matrix with orthonormal rows, so its natural
        scale is one and the cutoff is ``rank_tol * n``.
        """
        if self.r == 0:
            return True, np.inf
        smin = float(np.linalg.svd(self.K, compute_uv=False)[-1])
        return smin > rank_cutoff((self.n,), 1.0, tol), smin


def hartwig_decompose(A, tol: Tolerance | None = None) -> HartwigDecomposition:
    A = _square(A)
    n = A.shape[0]
    U, s, _ = np.linalg.svd(A)
    r = 0 if n == 0 or s[0] == 0.0 else int(np.count_nonzero(s > rank_cutoff(A.shape, s[0], tol)))
    if r == 0:
        return HartwigDecomposition(np.eye(n), np.zeros(0), np.zeros((0, 0)),
                                    np.zeros((0, n)), 0)
    top = (U.T @ A @ U)[:r]
    sigma = s[:r]
    K = top[:, :r] / sigma[:, None]
    L = top[:, r:] / sigma[:, None]
    return HartwigDecomposition(U, sigma, K, L, r)


def _group_inverse_blocks(h: HartwigDecomposition, tol) -> np.ndarray:
    ok, smin = h.k_is_invertible(tol)
    if not ok:
        raise GroupInverseNotExist(
            f"index of A is not one: smallest singular value of K is {smin:.3e}", smin)
    r, n = h.r, h.n
    Kinv = np.linalg.inv(h.K)
    top_left = Kinv / h.sigma[None, :]              # K^-1 S^-1
    top_right = top_left @ Kinv @ h.L              # K^-1 S^-1 K^-1 L
    return h.assemble(top_left, top_right, np.zeros((n - r, r)), np.zeros((n - r, n - r)))


def group_inverse(A, tol: Tolerance | None = None) -> np.ndarray:
    """Group inverse ``A^#`` via the Hartwig block form.

    Raises
    ------
    GroupInverseNotExist
        When ``K`` is numerically singular (index of ``A`` exceeds one).
    """
    h = hartwig_decompose(A, tol)
    if h.r == 0:
        return np.zeros_like(h.U)
    return _group_inverse_blocks(h, tol)


def core_inverse(A, tol: Tolerance | None = None) -> np.ndarray:
    """Core inverse, computed as ``A^# A A^+`` and checked against the block form."""
    A = _square(A)
    tol = _tol(tol)
    h = hartwig_decompose(A, tol)
    if h.r == 0:
        return np.zeros_like(A)
    try:
        Ag = _group_inverse_blocks(h, tol)
    except GroupInverseNotExist as exc:
        raise CoreInverseNotExist(str(exc), exc.detail) from None
    X = Ag @ A @ pinv(A, tol)

    r, n = h.r, h.n
    SK_inv = np.linalg.inv(h.sigma[:, None] * h.K)
    Xb = h.assemble(SK_inv, np.zeros((r, n - r)), np.zeros((n - r, r)), np.zeros((n - r, n - r)))
    gap = float(np.abs(X - Xb).max())
    scale = mag(A) * mag(X) ** 2
    if gap > tol.eq_tol * scale:
        raise InternalFormulaMismatch(
            f"core inverse paths disagree by {gap:.3e} (allowed {tol.eq_tol * scale:.3e})")
    return X
