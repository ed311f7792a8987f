"""Command-line front end.

Input files are UTF-8 JSON objects ``{"real": [[...]], "dual": [[...]]}``;
``dual`` may be omitted (zero) and vectors are ``n x 1`` matrices.

Exit codes: 0 success, 1 usage or input error, 2 the requested inverse does
not exist (or a candidate fails ``verify``).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .dualginv import (ExistenceCertificate, InverseKind, compute,
                       dual_index_is_one, verify_axioms, _axiom_scale)
from .dualnum import DualMatrix
from .dualsolve import solve
from .errors import (DimensionError, DualInvError, InconsistentCertificate,
                     InverseNotExist)
from .realginv import Tolerance

EXIT_OK, EXIT_USAGE, EXIT_NOT_EXIST = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _reject_constant(name):
    raise InputError(f"non-finite number {name} is not allowed")


def _matrix(value, key, path):
    if not isinstance(value, list) or not value:
        raise InputError(f"{path}: '{key}' must be a non-empty array")
    rows = value if isinstance(value[0], list) else [[v] for v in value]
    width = len(rows[0])
    for row in rows:
        if not isinstance(row, list) or len(row) != width or width == 0:
            raise InputError(f"{path}: '{key}' is not a rectangular 2-D array")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InputError(f"{path}: '{key}' has a non-numeric entry {v!r}")
    return np.array(rows, dtype=float)


def load_dual_matrix(path) -> DualMatrix:
    """Read a matrix file; raises :class:`InputError` on any defect."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict) or "real" not in data:
        raise InputError(f"{path}: expected an object with a 'real' key")
    real = _matrix(data["real"], "real", path)
    dual = _matrix(data["dual"], "dual", path) if data.get("dual") is not None else None
    if dual is not None and dual.shape != real.shape:
        raise InputError(f"{path}: real {real.shape} and dual {dual.shape} shapes differ")
    if not (np.all(np.isfinite(real)) and (dual is None or np.all(np.isfinite(dual)))):
        raise InputError(f"{path}: entries must be finite")
    return DualMatrix(real, dual)


def matrix_to_json(m: DualMatrix) -> dict:
    # float repr round-trips exactly (at most 17 significant digits)
    return {"real": m.real.tolist(), "dual": m.dual.tolist()}


def _num(v) -> str:
    if v is None:
        return "n/a"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    s = format(float(v) + 0.0, ".6g")
    return "0" if s == "-0" else s


def _matrix_text(M) -> list[str]:
    cells = [[_num(v) for v in row] for row in np.asarray(M)]
    width = max((len(c) for row in cells for c in row), default=1)
    return ["  [" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells]


def _dual_text(title, m: DualMatrix) -> list[str]:
    return [f"{title} real part:", *_matrix_text(m.real),
            f"{title} dual part:", *_matrix_text(m.dual)]


def _certificate_text(c: ExistenceCertificate) -> list[str]:
    lines = [
        f"dual index one: {_num(c.dual_index_one)}",
        f"index of A is one: {_num(c.index_A_one)}",
        f"rank(A): {c.rank_A}",
        f"rank([B A; A 0]) = {2 * c.rank_A + c.residual_rank_block} vs 2*rank(A) = {2 * c.rank_A}",
    ]
    if c.residual_rank_aug is None:
        lines.append("rank([A, B(I-AA#)]): n/a (group inverse of A does not exist)")
    else:
        lines.append(f"rank([A, B(I-AA#)]) = {c.rank_A + c.residual_rank_aug} vs rank(A) = {c.rank_A}")
    lines += [
        f"|(I-AA+)B(I-A+A)|max = {_num(c.residual_proj_mp)}",
        f"|(I-AA#)B(I-AA#)|max = {_num(c.residual_proj_gp)}",
        f"projector threshold = {_num(c.proj_threshold)}",
    ]
    return lines


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _tolerance(args) -> Tolerance:
    if args.tol is not None and args.tol <= 0:
        raise InputError("--tol must be positive")
    if args.eq_tol is not None and args.eq_tol <= 0:
        raise InputError("--eq-tol must be positive")
    rank_tol = args.tol if args.tol is not None else Tolerance().rank_tol
    return Tolerance(rank_tol, args.eq_tol)


def _not_exist(args, Ah, exc: Exception, tol) -> int:
    cert = getattr(exc, "detail", None) or getattr(exc, "certificate", None)
    if not isinstance(cert, ExistenceCertificate) and Ah.is_square:
        try:
            cert = dual_index_is_one(Ah, tol)
        except InconsistentCertificate as inner:
            cert = inner.certificate or cert
    payload = {"error": type(exc).__name__, "message": str(exc)}
    lines = [f"{type(exc).__name__}: {exc}"]
    if isinstance(cert, ExistenceCertificate):
        payload["certificate"] = cert.to_dict()
        lines += ["certificate:", *("  " + s for s in _certificate_text(cert))]
    elif isinstance(cert, dict):
        payload["certificate"] = cert
        lines += ["certificate:", *(f"  {k} = {_num(v)}" for k, v in cert.items())]
    _emit(args, payload, lines)
    return EXIT_NOT_EXIST


def cmd_inverse(args) -> int:
    Ah = load_dual_matrix(args.matrix)
    tol = _tolerance(args)
    kind = InverseKind(args.kind)
    try:
        res = compute(Ah, kind, tol)
    except (InverseNotExist, InconsistentCertificate) as exc:
        return _not_exist(args, Ah, exc, tol)
    payload = {
        "kind": kind.value,
        "path": res.path,
        "inverse": matrix_to_json(res.inverse),
        "axiom_residuals": res.axiom_residuals,
        "path_gap": res.path_gap,
    }
    lines = [f"kind: {kind.value}", f"path: {res.path}",
             *_dual_text("inverse", res.inverse), "axiom residuals:",
             *(f"  {k} {_num(v)}" for k, v in res.axiom_residuals.items())]
    if res.path_gap is not None:
        lines.append(f"compact vs block gap: {_num(res.path_gap)}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_index(args) -> int:
    Ah = load_dual_matrix(args.matrix)
    tol = _tolerance(args)
    try:
        cert = dual_index_is_one(Ah, tol)
    except InconsistentCertificate as exc:
        return _not_exist(args, Ah, exc, tol)
    _emit(args, cert.to_dict(), _certificate_text(cert))
    return EXIT_OK


def cmd_solve(args) -> int:
    Ah = load_dual_matrix(args.matrix)
    b = load_dual_matrix(args.rhs)
    tol = _tolerance(args)
    try:
        res = solve(Ah, b, args.kind, tol)
    except (InverseNotExist, InconsistentCertificate) as exc:
        return _not_exist(args, Ah, exc, tol)
    payload = {
        "kind": res.inverse_kind.value,
        "particular": matrix_to_json(res.particular),
        "projector": matrix_to_json(res.projector),
        "consistent": res.consistent,
        "error_norm": res.error_norm,
    }
    lines = [f"kind: {res.inverse_kind.value}",
             *_dual_text("particular solution", res.particular),
             *_dual_text("projector I - G A", res.projector),
             f"consistent: {_num(res.consistent)}",
             f"error norm: {_num(res.error_norm)}"]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    Ah = load_dual_matrix(args.matrix)
    G = load_dual_matrix(args.candidate)
    tol = _tolerance(args)
    kind = InverseKind(args.kind)
    res = verify_axioms(Ah, G, kind, tol)
    allowed = tol.eq_tol * _axiom_scale(Ah, G)
    ok = max(res.values()) <= allowed
    payload = {"kind": kind.value, "axiom_residuals": res, "allowed": allowed, "satisfied": ok}
    lines = [f"kind: {kind.value}", *(f"  {k} {_num(v)}" for k, v in res.items()),
             f"allowed residual: {_num(allowed)}",
             f"satisfies {kind.value} equations: {_num(ok)}"]
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_NOT_EXIST


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="relative singular-value cutoff (rank_tol)")
    common.add_argument("--eq-tol", type=float, default=None,
                        help="equality tolerance (default 100 * rank_tol)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    kinds = [k.value for k in InverseKind]

    parser = _Parser(prog="dualinv", description="Generalized inverses of dual matrices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("inverse", parents=[common], help="compute a dual generalized inverse")
    p.add_argument("matrix")
    p.add_argument("--kind", choices=kinds, default="dcgi")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("index", parents=[common], help="decide whether the dual index is one")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("solve", parents=[common], help="solve A x = b over the dual numbers")
    p.add_argument("matrix")
    p.add_argument("rhs")
    p.add_argument("--kind", choices=kinds, default="dmpgi")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check a candidate inverse")
    p.add_argument("matrix")
    p.add_argument("candidate")
    p.add_argument("--kind", choices=kinds, required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DimensionError, ValueError) as exc:
        print(f"dualinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DualInvError as exc:
        print(f"dualinv: internal error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
