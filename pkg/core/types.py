from __future__ import annotations

import threading
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from .errors import DimensionMismatchError
from .linalg import HERMITIAN_TOL, dagger, eigensystem, max_abs


class BasisKind(str, Enum):
    hermite = "hermite"
    fourier_grid = "fourier-grid"
    abstract = "abstract"


class Orientation(str, Enum):
    plus = "plus"
    minus = "minus"


class Side(str, Enum):
    left = "left"
    right = "right"


class SymmetryConvention(str, Enum):
    krein = "self-adjoint-unitary"
    beta = "anti-self-adjoint"


class BasisSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: BasisKind
    level: int = Field(ge=1)
    half_period: Optional[float] = None
    points_per_axis: Optional[int] = None
    spatial_dim: Optional[int] = None
    fiber_dim: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_grid(self) -> "BasisSpec":
        if self.kind != BasisKind.fourier_grid:
            return self
        if self.half_period is None or self.half_period <= 0:
            raise ValueError("fourier-grid basis needs half_period > 0")
        if not self.points_per_axis or not self.spatial_dim:
            raise ValueError("fourier-grid basis needs points_per_axis and spatial_dim")
        expected = self.points_per_axis**self.spatial_dim * self.fiber_dim
        if expected != self.level:
            raise ValueError(f"fourier-grid level {self.level} != points^dim * fiber = {expected}")
        return self

    def with_level(self, level: int) -> "BasisSpec":
        return self.model_copy(update={"level": level})


class TruncatedOperator(BaseModel):
    """Dense compression of an unbounded operator at one truncation level.

    The matrix is stored read-only. The Hermitian eigendecomposition is
    computed at most once per instance and shared between threads.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    basis: BasisSpec
    label: str = ""

    _spectrum: Optional[Tuple[np.ndarray, np.ndarray]] = PrivateAttr(default=None)
    _lock: threading.Lock = PrivateAttr(default_factory=threading.Lock)

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_square(cls, value) -> np.ndarray:
        matrix = np.array(value, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {matrix.shape}")
        matrix.setflags(write=False)
        return matrix

    @model_validator(mode="after")
    def _check_level(self) -> "TruncatedOperator":
        if self.matrix.shape[0] != self.basis.level:
            raise ValueError(f"matrix dimension {self.matrix.shape[0]} != basis level {self.basis.level}")
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def with_matrix(self, matrix: np.ndarray, label: str) -> "TruncatedOperator":
        return TruncatedOperator(matrix=matrix, basis=self.basis, label=label)

    def require_same_space(self, other: "TruncatedOperator") -> None:
        if self.matrix.shape != other.matrix.shape:
            raise DimensionMismatchError(
                f"{self.label or 'operator'} has shape {self.matrix.shape}, {other.label or 'operator'} has {other.matrix.shape}"
            )

    def eigensystem(self, tol: float = HERMITIAN_TOL) -> Tuple[np.ndarray, np.ndarray]:
        with self._lock:
            if self._spectrum is None:
                values, vectors = eigensystem(np.asarray(self.matrix), tol)
                values.setflags(write=False)
                vectors.setflags(write=False)
                self._spectrum = (values, vectors)
            return self._spectrum


class DerivedOperators(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mean_square: TruncatedOperator
    curvature_defect: TruncatedOperator
    wick_plus: TruncatedOperator
    wick_minus: TruncatedOperator


class FundamentalSymmetry(BaseModel):
    """Fundamental symmetry of a Krein structure, in either convention.

    ``krein``: J* = J, J^2 = 1.  ``beta``: beta* = -beta, beta^2 = -1.  J = i beta.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    convention: SymmetryConvention

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_square(cls, value) -> np.ndarray:
        matrix = np.array(value, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"symmetry matrix must be square, got shape {matrix.shape}")
        matrix.setflags(write=False)
        return matrix

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def residuals(self) -> Tuple[float, float]:
        """(adjoint residual, square residual) for the stated convention."""

        sign = 1.0 if self.convention == SymmetryConvention.krein else -1.0
        identity = np.eye(self.dim)
        adjoint_res = max_abs(dagger(self.matrix) - sign * self.matrix)
        square_res = max_abs(self.matrix @ self.matrix - sign * identity)
        return adjoint_res, square_res

    def validate_symmetry(self, tol: float = 1e-13) -> bool:
        adjoint_res, square_res = self.residuals()
        return adjoint_res <= tol and square_res <= tol

    def as_krein(self) -> "FundamentalSymmetry":
        if self.convention == SymmetryConvention.krein:
            return self
        return FundamentalSymmetry(matrix=1j * self.matrix, convention=SymmetryConvention.krein)

    def as_beta(self) -> "FundamentalSymmetry":
        if self.convention == SymmetryConvention.beta:
            return self
        return FundamentalSymmetry(matrix=-1j * self.matrix, convention=SymmetryConvention.beta)


__all__ = [
    "BasisKind",
    "Orientation",
    "Side",
    "SymmetryConvention",
    "BasisSpec",
    "TruncatedOperator",
    "DerivedOperators",
    "FundamentalSymmetry",
]
