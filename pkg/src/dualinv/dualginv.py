"""Generalized inverses of square dual matrices.

Four inverses of ``A_hat = A + eps*B`` are provided:

* MPDGI ``A^+ - eps A^+ B A^+`` -- always defined, not an inverse in general;
* DMPGI -- the dual matrix satisfying the four Penrose equations;
* DGGI  -- the dual group inverse (``AGA = A, GAG = G, AG = GA``);
* DCGI  -- the dual core inverse (``AGA = A, AG^2 = G, (AG)^T = AG``).

DGGI and DCGI exist exactly when the dual index of ``A_hat`` is one, which
:func:`dual_index_is_one` decides through four equivalent tests that must
agree.  Every existence decision uses the cutoffs in
:class:`~dualinv.realginv.Tolerance`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .dualnum import DualMatrix, max_abs_diff
from .errors import (DcgiNotExist, DggiNotExist, DimensionError, DmpgiNotExist,
                     InconsistentCertificate, InternalFormulaMismatch,
                     PreconditionError)
from .realginv import (DEFAULT_TOL, Tolerance, core_inverse, group_inverse,
                       hartwig_decompose, index_is_one, mag, numerical_rank,
                       pinv)


class InverseKind(str, Enum):
    MPDGI = "mpdgi"
    DMPGI = "dmpgi"
    DGGI = "dggi"
    DCGI = "dcgi"


class SpecialForm(str, Enum):
    DMPGI_EQ_MPDGI = "DMPGI_EQ_MPDGI"
    DCGI_SIMPLE = "DCGI_SIMPLE"
    DGGI_SIMPLE = "DGGI_SIMPLE"


AXIOMS = {
    InverseKind.MPDGI: ("(1)", "(2)", "(3)", "(4)"),
    InverseKind.DMPGI: ("(1)", "(2)", "(3)", "(4)"),
    InverseKind.DGGI: ("(1)", "(2)", "(5)"),
    InverseKind.DCGI: ("(1)", "(2')", "(3)"),
}


@dataclass(frozen=True)
class ExistenceCertificate:
    """Outcome of the dual-index-one tests with their raw residuals.

    Rank residuals are exact integers (zero means the test passes).  The
    projector residuals are max-abs entries compared with ``proj_threshold``.
    Fields that need ``A^#`` are ``None`` when the index of ``A`` exceeds one.
    """

    dual_index_one: bool
    index_A_one: bool
    rank_A: int
    residual_rank_block: int
    residual_rank_aug: int | None
    residual_proj_mp: float
    residual_proj_gp: float | None
    proj_threshold: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class DualGinvResult:
    inverse: DualMatrix
    kind: InverseKind
    axiom_residuals: dict[str, float]
    path: str
    path_gap: float | None = None


@dataclass(frozen=True, eq=False)
class SymmetricReport:
    dggi: DualMatrix
    dmpgi: DualMatrix
    dcgi: DualMatrix
    gaps: dict[str, float]
    range_condition: bool
    mpdgi_equal: bool


def _check_dual(Ah, square=True) -> DualMatrix:
    if not isinstance(Ah, DualMatrix):
        raise TypeError(f"expected DualMatrix, got {type(Ah).__name__}")
    if square and not Ah.is_square:
        raise DimensionError(f"dual matrix must be square, got shape {Ah.shape}")
    return Ah


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def _proj_threshold(A, Ainv, B, tol: Tolerance) -> float:
    # projector errors grow with the conditioning |A||A^-| and with |B|
    return tol.eq_tol * mag(B) * max(1.0, mag(A) * mag(Ainv))


def _maxabs(M) -> float:
    return float(np.abs(M).max()) if M.size else 0.0


def _mp_tests(Ah: DualMatrix, tol: Tolerance):
    """Both characterizations of DMPGI existence, plus intermediates."""
    A, B = Ah.real, Ah.dual
    m, n = A.shape
    Ap = pinv(A, tol)
    rank_A = numerical_rank(A, tol)
    block = np.block([[B, A], [A, np.zeros_like(A)]])
    res_block = numerical_rank(block, tol) - 2 * rank_A
    res_proj = _maxabs((np.eye(m) - A @ Ap) @ B @ (np.eye(n) - Ap @ A))
    thr = _proj_threshold(A, Ap, B, tol)
    return Ap, rank_A, res_block, res_proj, thr


def mpdgi(Ah: DualMatrix, tol: Tolerance | None = None) -> DualMatrix:
    """``A^+ - eps A^+ B A^+``; defined for every (also rectangular) dual matrix."""
    _check_dual(Ah, square=False)
    Ap = pinv(Ah.real, _tol(tol))
    return DualMatrix(Ap, -Ap @ Ah.dual @ Ap)


def dmpgi_exists(Ah: DualMatrix, tol: Tolerance | None = None) -> bool:
    """Whether the DMPGI exists.

    Evaluates ``(I - AA^+) B (I - A^+A) = 0`` and
    ``rank([[B, A], [A, 0]]) = 2 rank(A)``; raises
    :class:`InconsistentCertificate` if they disagree.
    """
    _check_dual(Ah, square=False)
    _, _, res_block, res_proj, thr = _mp_tests(Ah, _tol(tol))
    by_proj = res_proj <= thr
    if by_proj != (res_block == 0):
        raise InconsistentCertificate(
            f"DMPGI tests disagree: projector residual {res_proj:.3e} "
            f"(threshold {thr:.3e}) vs block rank excess {res_block}")
    return by_proj


def dmpgi(Ah: DualMatrix, tol: Tolerance | None = None) -> DualGinvResult:
    """Dual Moore-Penrose inverse by its closed-form expression.

    Raises
    ------
    DmpgiNotExist
        Carries ``(projector residual, block rank excess)`` as ``detail``.
    """
    tol = _tol(tol)
    _check_dual(Ah, square=False)
    if not dmpgi_exists(Ah, tol):
        _, _, res_block, res_proj, _ = _mp_tests(Ah, tol)
        raise DmpgiNotExist(
            f"DMPGI does not exist: |(I-AA+)B(I-A+A)| = {res_proj:.3e}",
            {"residual_proj_mp": res_proj, "residual_rank_block": res_block})
    A, B = Ah.real, Ah.dual
    m, n = A.shape
    Ap = pinv(A, tol)
    dual = -(Ap @ B @ Ap
             - pinv(A.T @ A, tol) @ B.T @ (np.eye(m) - A @ Ap)
             - (np.eye(n) - Ap @ A) @ B.T @ pinv(A @ A.T, tol))
    G = DualMatrix(Ap, dual)
    return _finish(Ah, G, InverseKind.DMPGI, "compact", tol)


def dual_index_is_one(Ah: DualMatrix, tol: Tolerance | None = None) -> ExistenceCertificate:
    """Decide whether ``R(A_hat^2) = R(A_hat)``.

    With ``Ind(A) = 1`` four tests are evaluated and must agree:
    ``rank([A, B(I - AA^#)]) = rank(A)``, ``rank([[B, A], [A, 0]]) = 2 rank(A)``,
    ``(I - AA^+) B (I - A^+A) = 0`` and ``(I - AA^#) B (I - AA^#) = 0``.
    """
    tol = _tol(tol)
    _check_dual(Ah)
    A, B = Ah.real, Ah.dual
    n = A.shape[0]
    Ap, rank_A, res_block, res_mp, thr_mp = _mp_tests(Ah, tol)
    idx = index_is_one(A, tol)
    if not idx:
        return ExistenceCertificate(False, False, rank_A, res_block, None, res_mp, None, thr_mp)

    try:
        Ag = group_inverse(A, tol)
    except ArithmeticError as exc:
        raise InconsistentCertificate(
            f"rank test reports index one but the Hartwig factor K is singular: {exc}") from None
    E = np.eye(n) - A @ Ag
    res_aug = numerical_rank(np.hstack([A, B @ E]), tol) - rank_A
    res_gp = _maxabs(E @ B @ E)
    thr_gp = _proj_threshold(A, Ag, B, tol)
    thr = max(thr_mp, thr_gp)
    cert = ExistenceCertificate(res_aug == 0, True, rank_A, res_block, res_aug,
                                res_mp, res_gp, thr)
    verdicts = (res_aug == 0, res_block == 0, res_mp <= thr_mp, res_gp <= thr_gp)
    if len(set(verdicts)) != 1:
        raise InconsistentCertificate(
            "dual-index-one characterizations disagree "
            f"(aug, block, proj+, proj#) = {verdicts}", cert)
    return cert


def dggi(Ah: DualMatrix, tol: Tolerance | None = None) -> DualGinvResult:
    """Dual group inverse ``A^# + eps R``.

    ``R = -A^# B A^# + (A^#)^2 B (I - AA^#) + (I - AA^#) B (A^#)^2``.
    """
    tol = _tol(tol)
    cert = dual_index_is_one(Ah, tol)
    if not cert.dual_index_one:
        raise DggiNotExist("DGGI does not exist: dual index is not one", cert)
    A, B = Ah.real, Ah.dual
    Ag = group_inverse(A, tol)
    E = np.eye(A.shape[0]) - A @ Ag
    Ag2 = Ag @ Ag
    R = -Ag @ B @ Ag + Ag2 @ B @ E + E @ B @ Ag2
    return _finish(Ah, DualMatrix(Ag, R), InverseKind.DGGI, "compact", tol)


def dcgi_compact(Ah: DualMatrix, tol: Tolerance | None = None) -> DualMatrix:
    """DCGI from real-part inverses only (no existence check).

    Dual part: ``-A^c B A^+ + A^# B A^+ - A^# B A^c + A^c (B A^+)^T (I - AA^+)
    + (I - AA^#) B A^# A^c`` with ``A^c`` the core inverse of ``A``.
    """
    tol = _tol(tol)
    A, B = Ah.real, Ah.dual
    I = np.eye(A.shape[0])
    Ap = pinv(A, tol)
    Ag = group_inverse(A, tol)
    Ac = core_inverse(A, tol)
    R = (-Ac @ B @ Ap + Ag @ B @ Ap - Ag @ B @ Ac
         + Ac @ (B @ Ap).T @ (I - A @ Ap)
         + (I - A @ Ag) @ B @ Ag @ Ac)
    return DualMatrix(Ac, R)


def dcgi_block(Ah: DualMatrix, tol: Tolerance | None = None) -> DualMatrix:
    """DCGI from the Hartwig decomposition of ``A`` (no existence check).

    With ``U^T B U = [[B1, B2], [B3, B4]]`` and ``S K`` the leading block::

        real = U [[(SK)^-1, 0], [0, 0]] U^T
        dual = U [[-K^-1 L B3 (SK)^-2 - (SK)^-1 B1 (SK)^-1, K^-1 S^-2 (B3 K^-1)^T],
                  [B3 (SK)^-2,                              0]] U^T
    """
    tol = _tol(tol)
    h = hartwig_decompose(Ah.real, tol)
    n, r = h.n, h.r
    if r == 0:
        return DualMatrix.zeros(n, n)
    B1, _, B3, _ = h.split(Ah.dual)
    Kinv = np.linalg.inv(h.K)
    SKi = np.linalg.inv(h.sigma[:, None] * h.K)
    SKi2 = SKi @ SKi
    z12, z21, z22 = np.zeros((r, n - r)), np.zeros((n - r, r)), np.zeros((n - r, n - r))
    real = h.assemble(SKi, z12, z21, z22)
    R11 = -Kinv @ h.L @ B3 @ SKi2 - SKi @ B1 @ SKi
    R12 = (Kinv / h.sigma[None, :] ** 2) @ (B3 @ Kinv).T
    R21 = B3 @ SKi2
    dual = h.assemble(R11, R12, R21, z22)
    return DualMatrix(real, dual)


def dcgi(Ah: DualMatrix, tol: Tolerance | None = None) -> DualGinvResult:
    """Dual core inverse, computed by the compact and the block formula.

    The two results must coincide (the DCGI is unique); a disagreement
    raises :class:`InternalFormulaMismatch`.
    """
    tol = _tol(tol)
    cert = dual_index_is_one(Ah, tol)
    if not cert.dual_index_one:
        raise DcgiNotExist("DCGI does not exist: dual index is not one", cert)
    G = dcgi_compact(Ah, tol)
    Gb = dcgi_block(Ah, tol)
    gap = max_abs_diff(G, Gb)
    allowed = tol.eq_tol * _axiom_scale(Ah, G)
    if gap > allowed:
        raise InternalFormulaMismatch(
            f"DCGI compact and block paths differ by {gap:.3e} (allowed {allowed:.3e})")
    return _finish(Ah, G, InverseKind.DCGI, "compact", tol, path_gap=gap)


def simple_form(Ah: DualMatrix, kind: InverseKind, tol: Tolerance | None = None) -> DualMatrix:
    """``X - eps X B X`` with ``X`` the real inverse matching ``kind``.

    For MPDGI/DMPGI ``X = A^+``, for DGGI ``X = A^#``, for DCGI the core inverse.
    """
    tol = _tol(tol)
    kind = InverseKind(kind)
    A, B = Ah.real, Ah.dual
    if kind in (InverseKind.MPDGI, InverseKind.DMPGI):
        X = pinv(A, tol)
    elif kind is InverseKind.DGGI:
        X = group_inverse(A, tol)
    else:
        X = core_inverse(A, tol)
    return DualMatrix(X, -X @ B @ X)


def classify_special_forms(Ah: DualMatrix, tol: Tolerance | None = None) -> frozenset[SpecialForm]:
    """Flags telling which inverses reduce to ``X - eps X B X``.

    * ``DMPGI_EQ_MPDGI``: ``(I - AA^+) B = 0`` and ``B (I - A^+A) = 0``;
    * ``DCGI_SIMPLE``: ``Ind(A) = 1`` and ``(I - AA^+) B = 0``, cross-checked
      against ``rank([A, B]) = rank(A)``;
    * ``DGGI_SIMPLE``: ``Ind(A) = 1``, ``B (I - AA^#) = 0`` and ``(I - AA^#) B = 0``.

    For every flag that is set, the closed form is compared with the general
    formula and a mismatch raises :class:`InternalFormulaMismatch`.
    """
    tol = _tol(tol)
    _check_dual(Ah)
    A, B = Ah.real, Ah.dual
    I = np.eye(A.shape[0])
    Ap = pinv(A, tol)
    thr_mp = _proj_threshold(A, Ap, B, tol)
    left = _maxabs((I - A @ Ap) @ B) <= thr_mp
    right = _maxabs(B @ (I - Ap @ A)) <= thr_mp
    in_range = numerical_rank(np.hstack([A, B]), tol) == numerical_rank(A, tol)
    if in_range != left:
        raise InconsistentCertificate(
            "(I - AA^+)B = 0 and rank([A, B]) = rank(A) disagree")

    flags = set()
    if left and right:
        flags.add(SpecialForm.DMPGI_EQ_MPDGI)
    if index_is_one(A, tol):
        if left:
            flags.add(SpecialForm.DCGI_SIMPLE)
        Ag = group_inverse(A, tol)
        E = I - A @ Ag
        thr_g = _proj_threshold(A, Ag, B, tol)
        if _maxabs(B @ E) <= thr_g and _maxabs(E @ B) <= thr_g:
            flags.add(SpecialForm.DGGI_SIMPLE)

    checks = {
        SpecialForm.DMPGI_EQ_MPDGI: (InverseKind.DMPGI, dmpgi),
        SpecialForm.DCGI_SIMPLE: (InverseKind.DCGI, dcgi),
        SpecialForm.DGGI_SIMPLE: (InverseKind.DGGI, dggi),
    }
    for flag in flags:
        kind, general = checks[flag]
        G = general(Ah, tol).inverse
        gap = max_abs_diff(simple_form(Ah, kind, tol), G)
        allowed = tol.eq_tol * _axiom_scale(Ah, G)
        if gap > allowed:
            raise InternalFormulaMismatch(
                f"{flag.value}: simple form differs from general formula by {gap:.3e}")
    return frozenset(flags)


def symmetric_identities(Ah: DualMatrix, tol: Tolerance | None = None) -> SymmetricReport:
    """Check that DGGI, DMPGI and DCGI of a symmetric dual matrix coincide.

    Each inverse must also be symmetric.  When ``rank([A, B]) = rank(A)`` the
    common value must further equal the MPDGI.
    """
    tol = _tol(tol)
    _check_dual(Ah)
    asym = max_abs_diff(Ah, Ah.T)
    if asym > tol.eq_tol * mag(Ah.real, Ah.dual):
        raise PreconditionError(f"dual matrix is not symmetric (|A - A^T| = {asym:.3e})")
    cert = dual_index_is_one(Ah, tol)
    if not cert.dual_index_one:
        raise DcgiNotExist("DCGI does not exist: dual index is not one", cert)

    g = dggi(Ah, tol).inverse
    p = dmpgi(Ah, tol).inverse
    c = dcgi(Ah, tol).inverse
    gaps = {
        "dggi-dmpgi": max_abs_diff(g, p),
        "dggi-dcgi": max_abs_diff(g, c),
        "dmpgi-dcgi": max_abs_diff(p, c),
        "dggi-sym": max_abs_diff(g, g.T),
        "dmpgi-sym": max_abs_diff(p, p.T),
        "dcgi-sym": max_abs_diff(c, c.T),
    }
    allowed = tol.eq_tol * _axiom_scale(Ah, c)
    bad = {k: v for k, v in gaps.items() if v > allowed}
    if bad:
        raise InternalFormulaMismatch(f"symmetric identities violated: {bad}")

    A, B = Ah.real, Ah.dual
    range_condition = numerical_rank(np.hstack([A, B]), tol) == cert.rank_A
    gaps["mpdgi-dcgi"] = max_abs_diff(mpdgi(Ah, tol), c)
    mpdgi_equal = gaps["mpdgi-dcgi"] <= allowed
    if range_condition and not mpdgi_equal:
        raise InternalFormulaMismatch(
            f"range condition holds but MPDGI differs by {gaps['mpdgi-dcgi']:.3e}")
    return SymmetricReport(g, p, c, gaps, range_condition, mpdgi_equal)


def verify_axioms(Ah: DualMatrix, G: DualMatrix, kind: InverseKind,
                  tol: Tolerance | None = None) -> dict[str, float]:
    """Max-abs residual of each defining equation of ``kind``.

    A pure checker: it never raises on a violated equation, only on
    non-conforming shapes.
    """
    kind = InverseKind(kind)
    m, n = Ah.shape
    if G.shape != (n, m):
        raise DimensionError(f"candidate shape {G.shape} does not conform to {Ah.shape}")
    if kind in (InverseKind.DGGI, InverseKind.DCGI) and m != n:
        raise DimensionError(f"{kind.value} needs a square matrix, got {Ah.shape}")
    AG = Ah @ G
    out = {"(1)": max_abs_diff(AG @ Ah, Ah)}
    if kind is InverseKind.DCGI:
        out["(2')"] = max_abs_diff(AG @ G, G)
        out["(3)"] = max_abs_diff(AG.T, AG)
        return out
    GA = G @ Ah
    out["(2)"] = max_abs_diff(GA @ G, G)
    if kind is InverseKind.DGGI:
        out["(5)"] = max_abs_diff(AG, GA)
    else:
        out["(3)"] = max_abs_diff(AG.T, AG)
        out["(4)"] = max_abs_diff(GA.T, GA)
    return out


def _axiom_scale(Ah: DualMatrix, G: DualMatrix) -> float:
    return mag(Ah.real, Ah.dual) ** 2 * mag(G.real, G.dual) ** 2


def _finish(Ah, G, kind, path, tol, path_gap=None) -> DualGinvResult:
    res = verify_axioms(Ah, G, kind)
    allowed = tol.eq_tol * _axiom_scale(Ah, G)
    worst = max(res.values())
    if worst > allowed:
        raise InternalFormulaMismatch(
            f"{kind.value} fails its defining equations: residual {worst:.3e} "
            f"(allowed {allowed:.3e})")
    return DualGinvResult(G, kind, res, path, path_gap)


def compute(Ah: DualMatrix, kind: InverseKind, tol: Tolerance | None = None) -> DualGinvResult:
    """Dispatch to the routine for ``kind``.

    The MPDGI is returned with its Penrose residuals but is never rejected
    for failing them.
    """
    kind = InverseKind(kind)
    if kind is InverseKind.MPDGI:
        G = mpdgi(Ah, tol)
        return DualGinvResult(G, kind, verify_axioms(Ah, G, kind), "simple-form")
    return {InverseKind.DMPGI: dmpgi, InverseKind.DGGI: dggi, InverseKind.DCGI: dcgi}[kind](Ah, tol)
