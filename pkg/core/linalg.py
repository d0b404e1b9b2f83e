"""Small dense helpers shared by the operator layer.

Every check here works on plain ``numpy`` arrays so the pydantic types can
call into it without import cycles.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np
from scipy.linalg import eigvalsh

from .errors import DimensionMismatchError, HermiticityError

HERMITIAN_TOL = 1e-10
LARGE_NORM_DIM = 256


def dagger(matrix: np.ndarray) -> np.ndarray:
    return matrix.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def hermitian_residual(matrix: np.ndarray) -> float:
    """Max-entry asymmetry relative to the largest entry (0 for the zero matrix)."""

    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(matrix - dagger(matrix)))) / scale


def hermitize(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return (H + H*)/2, refusing inputs that are not Hermitian within ``tol``."""

    residual = hermitian_residual(matrix)
    if residual > tol:
        raise HermiticityError(f"matrix is not Hermitian: relative residual {residual:.3e} > {tol:.1e}")
    return 0.5 * (matrix + dagger(matrix))


def is_diagonal(matrix: np.ndarray) -> bool:
    off = matrix - np.diag(np.diag(matrix))
    return not np.any(off)


def eigensystem(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unitary eigenvectors of a Hermitian matrix.

    Diagonal inputs short-circuit to the identity basis so functional calculus
    is exact on them.
    """

    herm = hermitize(matrix, tol)
    if is_diagonal(herm):
        return np.real(np.diag(herm)).copy(), np.eye(herm.shape[0], dtype=np.complex128)
    values, vectors = np.linalg.eigh(herm)
    return values, vectors


def frobenius_relative(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape {a.shape} != {b.shape}")
    scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a - b)) / scale


def max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def op_norm(matrix: np.ndarray) -> float:
    """Largest singular value. Big matrices use the top eigenvalue of A* A only."""

    if matrix.size == 0:
        return 0.0
    n = min(matrix.shape)
    if n < LARGE_NORM_DIM:
        return float(np.linalg.norm(matrix, ord=2))
    gram = dagger(matrix) @ matrix if matrix.shape[0] >= matrix.shape[1] else matrix @ dagger(matrix)
    top = eigvalsh(0.5 * (gram + dagger(gram)), subset_by_index=[n - 1, n - 1])
    return float(np.sqrt(max(float(top[0]), 0.0)))


__all__ = [
    "HERMITIAN_TOL",
    "dagger",
    "commutator",
    "anticommutator",
    "hermitian_residual",
    "hermitize",
    "is_diagonal",
    "eigensystem",
    "frobenius_relative",
    "max_abs",
    "op_norm",
]
