"""Pure operations on truncated operators.

Every derived operator is built from the compressed pair (D, D*) at a fixed
level. Fractional powers and square roots always go through the Hermitian
eigendecomposition cached on the operator.
"""

from __future__ import annotations

from functools import lru_cache, reduce
from typing import Callable, Tuple

import numpy as np
from scipy.linalg import dft

from .errors import DimensionMismatchError, DomainError
from .linalg import dagger, frobenius_relative, op_norm
from .types import (
    BasisKind,
    BasisSpec,
    DerivedOperators,
    FundamentalSymmetry,
    Orientation,
    Side,
    TruncatedOperator,
)

BULK_MARGIN = 4

ScalarFunction = Callable[[np.ndarray], np.ndarray]


def _hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + dagger(matrix))


def adjoint(T: TruncatedOperator) -> TruncatedOperator:
    return T.with_matrix(dagger(T.matrix), f"{T.label}*" if T.label else "")


def mean_square(D: TruncatedOperator) -> TruncatedOperator:
    d = D.matrix
    dd = dagger(d)
    return D.with_matrix(_hermitian_part(0.5 * (d @ dd + dd @ d)), f"<{D.label}>^2")


def curvature_defect(D: TruncatedOperator) -> TruncatedOperator:
    """(i/2)(D^2 - D*^2), formed from the skew and symmetric parts so it vanishes exactly for D = D*."""

    d = D.matrix
    dd = dagger(d)
    skew = d - dd
    sym = d + dd
    return D.with_matrix(_hermitian_part(0.25j * (skew @ sym + sym @ skew)), f"R[{D.label}]")


def wick_rotate(D: TruncatedOperator, orientation: Orientation = Orientation.plus) -> TruncatedOperator:
    """plus: (D+D*)/2 + (i/2)(D-D*).  minus: (D+D*)/2 - (i/2)(D-D*).

    Both forms are conjugate-symmetric entrywise without any symmetrization.
    """

    d = D.matrix
    dd = dagger(d)
    real_part = 0.5 * (d + dd)
    imag_part = 0.5j * (d - dd)
    orientation = Orientation(orientation)
    if orientation == Orientation.plus:
        return D.with_matrix(real_part + imag_part, f"{D.label}_E")
    return D.with_matrix(real_part - imag_part, f"{D.label}~_E")


def derive(D: TruncatedOperator) -> DerivedOperators:
    return DerivedOperators(
        mean_square=mean_square(D),
        curvature_defect=curvature_defect(D),
        wick_plus=wick_rotate(D, Orientation.plus),
        wick_minus=wick_rotate(D, Orientation.minus),
    )


def krein_from_beta(beta: FundamentalSymmetry) -> FundamentalSymmetry:
    return beta.as_krein()


def krein_adjoint(T: TruncatedOperator, J: FundamentalSymmetry) -> TruncatedOperator:
    """T+ = J T* J. A beta-convention symmetry is converted with J = i beta first."""

    if J.dim != T.dim:
        raise DimensionMismatchError(f"symmetry has dimension {J.dim}, operator {T.dim}")
    j = J.as_krein().matrix
    return T.with_matrix(j @ dagger(T.matrix) @ j, f"{T.label}+" if T.label else "")


def _spectral_apply(H: TruncatedOperator, f: ScalarFunction, label: str) -> TruncatedOperator:
    values, vectors = H.eigensystem()
    with np.errstate(all="ignore"):
        mapped = np.asarray(f(values), dtype=np.complex128)
    if mapped.shape != values.shape or not np.all(np.isfinite(mapped)):
        bad = values[~np.isfinite(mapped)] if mapped.shape == values.shape else values
        raise DomainError(f"function undefined on spectrum of {H.label or 'operator'} (e.g. at {bad[:3]})")
    matrix = (vectors * mapped) @ dagger(vectors)
    return H.with_matrix(matrix, label)


def func_calculus(H: TruncatedOperator, f: ScalarFunction, label: str = "") -> TruncatedOperator:
    return _spectral_apply(H, f, label or f"f({H.label})")


def sqrt_abs(H: TruncatedOperator) -> TruncatedOperator:
    """Positive square root of a PSD operator; round-off negatives are clipped to zero."""

    return _spectral_apply(H, lambda w: np.sqrt(np.clip(w, 0.0, None)), f"sqrt({H.label})")


def resolvent_power(H: TruncatedOperator, exponent: float, label: str = "") -> TruncatedOperator:
    """(1 + H)^exponent for PSD H."""

    return _spectral_apply(H, lambda w: np.power(1.0 + np.clip(w, 0.0, None), exponent), label or f"(1+{H.label})^{exponent:g}")


def _in_eigenbasis(T: TruncatedOperator, D: TruncatedOperator) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    D.require_same_space(T)
    values, vectors = D.eigensystem()
    return values, vectors, dagger(vectors) @ T.matrix @ vectors


def delta_map(T: TruncatedOperator, D: TruncatedOperator, order: int = 1) -> TruncatedOperator:
    """Iterated commutator with (1+D^2)^{1/2}, evaluated entrywise in the eigenbasis of D."""

    if order < 0:
        raise DomainError(f"delta order must be nonnegative, got {order}")
    if order == 0:
        return T.with_matrix(T.matrix, T.label)
    values, vectors, local = _in_eigenbasis(T, D)
    root = np.sqrt(1.0 + values**2)
    local = local * np.power(root[:, None] - root[None, :], order)
    return T.with_matrix(vectors @ local @ dagger(vectors), f"delta^{order}({T.label})")


def lr_maps(T: TruncatedOperator, D: TruncatedOperator, side: Side = Side.left) -> TruncatedOperator:
    values, vectors, local = _in_eigenbasis(T, D)
    sq = values**2
    commuted = local * (sq[:, None] - sq[None, :])
    inv_root = 1.0 / np.sqrt(1.0 + sq)
    side = Side(side)
    if side == Side.left:
        commuted = inv_root[:, None] * commuted
        label = f"L({T.label})"
    else:
        commuted = commuted * inv_root[None, :]
        label = f"R({T.label})"
    return T.with_matrix(vectors @ commuted @ dagger(vectors), label)


def sigma_conjugate(T: TruncatedOperator, D: TruncatedOperator, z: complex) -> TruncatedOperator:
    values, vectors, local = _in_eigenbasis(T, D)
    log_weight = np.log1p(values**2)
    scale = np.exp((complex(z) / 2.0) * (log_weight[:, None] - log_weight[None, :]))
    return T.with_matrix(vectors @ (local * scale) @ dagger(vectors), f"sigma^{z}({T.label})")


def commutator_op(A: TruncatedOperator, B: TruncatedOperator, label: str = "") -> TruncatedOperator:
    A.require_same_space(B)
    return A.with_matrix(A.matrix @ B.matrix - B.matrix @ A.matrix, label or f"[{A.label},{B.label}]")


def universal_bounds(D: TruncatedOperator, derived: DerivedOperators | None = None) -> Tuple[float, float]:
    """Norms of D(1+<D>^2)^{-1/2} and (1+<D>^2)^{-1/2} R_D (1+<D>^2)^{-1/2}.

    These are bounded by sqrt(2) and 2 at every truncation.
    """

    derived = derived or derive(D)
    weight = resolvent_power(derived.mean_square, -0.5).matrix
    first = op_norm(D.matrix @ weight)
    second = op_norm(weight @ derived.curvature_defect.matrix @ weight)
    return first, second


def wick_residuals(derived: DerivedOperators) -> dict:
    """Relative residuals of the Wick decomposition identities."""

    m = derived.mean_square.matrix
    r = derived.curvature_defect.matrix
    plus = derived.wick_plus.matrix
    minus = derived.wick_minus.matrix
    return {
        "plus_square": frobenius_relative(plus @ plus, m + r),
        "minus_square": frobenius_relative(minus @ minus, m - r),
        "difference": frobenius_relative(plus @ plus - minus @ minus, 2.0 * r),
    }


def bulk_size(T: TruncatedOperator, margin: int = BULK_MARGIN) -> int:
    if T.basis.kind != BasisKind.hermite:
        return T.dim
    return max(T.dim - margin, 0)


def bulk(matrix: np.ndarray, size: int) -> np.ndarray:
    return matrix[:size, :size]


@lru_cache(maxsize=32)
def low_mode_basis(points: int, spatial_dim: int, fiber_dim: int) -> np.ndarray:
    """Orthonormal grid vectors of the Fourier modes with |k| < points/4, fiber innermost."""

    modes = np.fft.fftfreq(points, d=1.0 / points)
    columns = dagger(dft(points, scale="sqrtn"))[:, np.abs(modes) < points / 4]
    basis = np.kron(reduce(np.kron, [columns] * spatial_dim, np.eye(1)), np.eye(fiber_dim))
    basis.setflags(write=False)
    return basis


def compress(matrix: np.ndarray, basis: BasisSpec, margin: int = BULK_MARGIN) -> np.ndarray:
    """Restrict to the low-energy block where truncation is exact.

    Hermite: the leading N - margin block, never less than half of it. Fourier grid: the modes with |k| < points/4,
    which no product with a resolved multiplier can alias. Abstract: unchanged.
    """

    if basis.kind == BasisKind.hermite:
        size = max(basis.level - margin, basis.level // 2)
        return matrix[:size, :size]
    if basis.kind == BasisKind.fourier_grid:
        low = low_mode_basis(basis.points_per_axis, basis.spatial_dim, basis.fiber_dim)
        return dagger(low) @ matrix @ low
    return matrix


def compressed_norm(matrix: np.ndarray, basis: BasisSpec, margin: int = BULK_MARGIN) -> float:
    return op_norm(compress(matrix, basis, margin))



__all__ = [
    "BULK_MARGIN",
    "adjoint",
    "mean_square",
    "curvature_defect",
    "wick_rotate",
    "derive",
    "krein_from_beta",
    "krein_adjoint",
    "func_calculus",
    "sqrt_abs",
    "resolvent_power",
    "delta_map",
    "lr_maps",
    "sigma_conjugate",
    "commutator_op",
    "universal_bounds",
    "wick_residuals",
    "bulk_size",
    "bulk",
    "low_mode_basis",
    "compress",
    "compressed_norm",
]
