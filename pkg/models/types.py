from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.linalg import anticommutator, commutator, dagger, max_abs
from core.types import BasisSpec, DerivedOperators, FundamentalSymmetry, TruncatedOperator


class ModelFamily(str, Enum):
    finite = "finite"
    first_order = "first-order"
    oscillator = "oscillator"
    line = "line"
    lorentz = "lorentz"
    pauli = "pauli"


class AlgebraSample(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    operator: TruncatedOperator


class ModelTriple(BaseModel):
    """One truncation level of a (possibly pseudo-Riemannian) spectral triple."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    D: TruncatedOperator
    algebra_samples: List[AlgebraSample]
    grading: Optional[TruncatedOperator] = None
    beta: Optional[FundamentalSymmetry] = None
    krein_sign: int = 1
    derived: DerivedOperators
    basis: BasisSpec
    family: ModelFamily
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @property
    def level(self) -> int:
        return self.basis.level

    @property
    def is_even(self) -> bool:
        return self.grading is not None

    def sample(self, label: str) -> TruncatedOperator:
        for item in self.algebra_samples:
            if item.label == label:
                return item.operator
        raise KeyError(label)

    def structure_residuals(self) -> Dict[str, float]:
        """Residuals of the grading and fundamental-symmetry relations that are present."""

        residuals: Dict[str, float] = {}
        d = self.D.matrix
        identity = np.eye(self.level)
        if self.grading is not None:
            g = self.grading.matrix
            residuals["grading_selfadjoint"] = max_abs(dagger(g) - g)
            residuals["grading_involution"] = max_abs(g @ g - identity)
            residuals["grading_odd_D"] = max_abs(anticommutator(g, d))
            residuals["grading_even_algebra"] = max(
                (max_abs(commutator(g, a.operator.matrix)) for a in self.algebra_samples), default=0.0
            )
        if self.beta is not None:
            b = self.beta.matrix
            residuals["beta_antiselfadjoint"] = max_abs(dagger(b) + b)
            residuals["beta_square"] = max_abs(b @ b + identity)
            residuals["beta_commutes_algebra"] = max(
                (max_abs(commutator(b, a.operator.matrix)) for a in self.algebra_samples), default=0.0
            )
        return residuals


class FirstOrderSpec(BaseModel):
    """Constant-coefficient D = sum_j M_j d/dx_j + K on a periodic grid of half-period L."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    M: List[np.ndarray]
    K: np.ndarray
    half_period: float = Field(default=float(np.pi), gt=0)
    points: int = Field(default=64, ge=2)

    @field_validator("M", mode="before")
    @classmethod
    def _as_matrices(cls, value) -> List[np.ndarray]:
        return [np.array(m, dtype=np.complex128) for m in value]

    @field_validator("K", mode="before")
    @classmethod
    def _as_matrix(cls, value) -> np.ndarray:
        return np.array(value, dtype=np.complex128)

    @model_validator(mode="after")
    def _check_shapes(self) -> "FirstOrderSpec":
        if not self.M:
            raise ValueError("first-order spec needs at least one coefficient matrix")
        d = self.K.shape[0] if self.K.ndim == 2 else -1
        for m in [*self.M, self.K]:
            if m.ndim != 2 or m.shape != (d, d):
                raise ValueError(f"all coefficient matrices must be {d}x{d}, got {m.shape}")
        if self.points & (self.points - 1):
            raise ValueError(f"grid points per axis must be a power of 2, got {self.points}")
        return self

    @property
    def spatial_dim(self) -> int:
        return len(self.M)

    @property
    def fiber_dim(self) -> int:
        return self.K.shape[0]

    @property
    def level(self) -> int:
        return self.points**self.spatial_dim * self.fiber_dim

    def with_points(self, points: int) -> "FirstOrderSpec":
        return FirstOrderSpec(M=self.M, K=self.K, half_period=self.half_period, points=points)


class ConditionResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    passed: bool
    measured: float
    witness: Optional[List[float]] = None
    detail: str = ""


class ConditionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    conditions: Dict[str, ConditionResult]
    admissible: bool
    smoothly_summable: bool
    samples: int
    seed: int


__all__ = [
    "ModelFamily",
    "AlgebraSample",
    "ModelTriple",
    "FirstOrderSpec",
    "ConditionResult",
    "ConditionReport",
]
