"""Dual numbers and dense dual matrices (epsilon**2 = 0).

A dual matrix ``A + eps*B`` is stored as two real arrays of equal shape.  All
products drop the ``eps**2`` term structurally, so nilpotency of pure-dual
matrices is exact rather than a rounding artefact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class DualScalar:
    """Dual number ``real + eps*dual``."""

    real: float
    dual: float = 0.0

    def __add__(self, other: DualScalar) -> DualScalar:
        return DualScalar(self.real + other.real, self.dual + other.dual)

    def __sub__(self, other: DualScalar) -> DualScalar:
        return DualScalar(self.real - other.real, self.dual - other.dual)

    def __neg__(self) -> DualScalar:
        return DualScalar(-self.real, -self.dual)

    def __mul__(self, other: DualScalar) -> DualScalar:
        return DualScalar(self.real * other.real,
                          self.real * other.dual + self.dual * other.real)

    def __str__(self) -> str:
        sign = "-" if self.dual < 0 else "+"
        return f"{self.real:g} {sign} {abs(self.dual):g}ε"


def _as_real_matrix(x, name: str) -> np.ndarray:
    arr = np.array(x, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D array, got ndim={arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DualMatrix:
    """Dense dual matrix ``real + eps*dual``.

    Both parts are copied into read-only float arrays on construction.  One
    dimensional input is read as a column, so ``DualMatrix([1, 0], [0, 1])``
    is the dual vector ``[1, eps]^T``.  The dual part defaults to zero.
    """

    real: np.ndarray
    dual: np.ndarray = None

    def __post_init__(self):
        real = _as_real_matrix(self.real, "real part")
        if self.dual is None:
            dual = np.zeros_like(real)
            dual.setflags(write=False)
        else:
            dual = _as_real_matrix(self.dual, "dual part")
        if real.shape != dual.shape:
            raise DimensionError(
                f"real part {real.shape} and dual part {dual.shape} differ in shape")
        object.__setattr__(self, "real", real)
        object.__setattr__(self, "dual", dual)

    @classmethod
    def identity(cls, n: int) -> DualMatrix:
        return cls(np.eye(n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> DualMatrix:
        return cls(np.zeros((rows, cols)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.real.shape

    @property
    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    @property
    def is_vector(self) -> bool:
        return self.shape[1] == 1

    @property
    def T(self) -> DualMatrix:
        return dual_transpose(self)

    def max_abs(self) -> float:
        """Largest absolute entry over both parts (0 for an empty matrix)."""
        if self.real.size == 0:
            return 0.0
        return float(max(np.abs(self.real).max(), np.abs(self.dual).max()))

    def __matmul__(self, other: DualMatrix) -> DualMatrix:
        return dual_matmul(self, other)

    def __add__(self, other: DualMatrix) -> DualMatrix:
        _same_shape(self, other)
        return DualMatrix(self.real + other.real, self.dual + other.dual)

    def __sub__(self, other: DualMatrix) -> DualMatrix:
        _same_shape(self, other)
        return DualMatrix(self.real - other.real, self.dual - other.dual)

    def __neg__(self) -> DualMatrix:
        return DualMatrix(-self.real, -self.dual)

    def __mul__(self, scalar) -> DualMatrix:
        if isinstance(scalar, DualScalar):
            return DualMatrix(scalar.real * self.real,
                              scalar.real * self.dual + scalar.dual * self.real)
        return DualMatrix(scalar * self.real, scalar * self.dual)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"DualMatrix(real={self.real.tolist()!r}, dual={self.dual.tolist()!r})"


def _same_shape(x: DualMatrix, y: DualMatrix) -> None:
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {y.shape}")


def dual_matmul(lhs: DualMatrix, rhs: DualMatrix) -> DualMatrix:
    """Product ``(A + eps B)(C + eps D) = AC + eps (AD + BC)``."""
    if lhs.shape[1] != rhs.shape[0]:
        raise DimensionError(
            f"cannot multiply {lhs.shape} by {rhs.shape}: inner dimensions differ")
    return DualMatrix(lhs.real @ rhs.real,
                      lhs.real @ rhs.dual + lhs.dual @ rhs.real)


def dual_transpose(m: DualMatrix) -> DualMatrix:
    return DualMatrix(m.real.T, m.dual.T)


def dual_norm_squared(u: DualMatrix) -> DualScalar:
    """``u^T u = |p|^2 + 2 eps p^T q`` for a dual vector ``u = p + eps q``."""
    if u.shape[0] < 1 or not u.is_vector:
        raise DimensionError(f"expected a non-empty column vector, got {u.shape}")
    p = u.real[:, 0]
    q = u.dual[:, 0]
    return DualScalar(float(p @ p), 2.0 * float(p @ q))


def angle_norm(u: DualMatrix) -> float:
    """Error norm ``|p| + |q|`` of a dual vector ``u = p + eps q``.

    Also defined for a zero real part, where it reduces to ``|q|``.
    """
    if not u.is_vector:
        raise DimensionError(f"expected a column vector, got {u.shape}")
    return _norm2(u.real) + _norm2(u.dual)


def _norm2(v) -> float:
    # scale first so that tiny (or huge) entries neither underflow nor overflow
    m = float(np.abs(v).max()) if v.size else 0.0
    return 0.0 if m == 0.0 else m * float(np.linalg.norm(v / m))


def approx_eq(x: DualMatrix, y: DualMatrix, tol: float = 1e-9) -> bool:
    """Entrywise comparison of both parts with tolerance ``tol*max(1, |x|_max)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if x.shape != y.shape:
        return False
    if x.real.size == 0:
        return True
    diff = max(np.abs(x.real - y.real).max(), np.abs(x.dual - y.dual).max())
    return bool(diff <= tol * max(1.0, x.max_abs()))


def max_abs_diff(x: DualMatrix, y: DualMatrix) -> float:
    _same_shape(x, y)
    if x.real.size == 0:
        return 0.0
    return float(max(np.abs(x.real - y.real).max(), np.abs(x.dual - y.dual).max()))
