"""Weights phi_s, the Q_n norms and single-factorization upper bounds for P_n."""

from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.errors import DomainError, FactorizationError
from core.linalg import dagger, max_abs, op_norm
from core.types import TruncatedOperator

FACTORIZATION_TOL = 1e-12


class WeightValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: float
    value: float
    level: int
    stabilized: Optional[bool] = None


class UpperBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    kind: str = "upper bound"
    factorizations: int = 1
    level: int


def _weight_diagonal(D: TruncatedOperator, s: float) -> Tuple[np.ndarray, np.ndarray]:
    values, vectors = D.eigensystem()
    return np.power(1.0 + values**2, -s / 4.0), vectors


def phi_weight(T: TruncatedOperator, D: TruncatedOperator, s: float) -> WeightValue:
    """Trace((1+D^2)^{-s/4} T (1+D^2)^{-s/4}) at the truncation level of D."""

    if not s > 0:
        raise DomainError(f"phi_s needs s > 0, got {s}")
    D.require_same_space(T)
    weight, vectors = _weight_diagonal(D, s)
    local = dagger(vectors) @ T.matrix @ vectors
    value = np.sum(weight * weight * np.real(np.diag(local)))
    return WeightValue(s=float(s), value=float(value), level=D.dim)


def qn_norm(T: TruncatedOperator, D: TruncatedOperator, p: float, n: int) -> float:
    """(||T||^2 + phi_{p+1/n}(|T|^2) + phi_{p+1/n}(|T*|^2))^{1/2}."""

    if p < 1 or n < 1:
        raise DomainError(f"Q_n needs p >= 1 and n >= 1, got p={p}, n={n}")
    s = p + 1.0 / n
    t = T.matrix
    left = T.with_matrix(dagger(t) @ t, "|T|^2")
    right = T.with_matrix(t @ dagger(t), "|T*|^2")
    total = op_norm(t) ** 2 + phi_weight(left, D, s).value + phi_weight(right, D, s).value
    return float(np.sqrt(max(total, 0.0)))


def p1_upper_bound(
    T1: TruncatedOperator,
    T2: TruncatedOperator,
    D: TruncatedOperator,
    p: float,
    n: int,
    target: Optional[TruncatedOperator] = None,
) -> UpperBound:
    """Q_n(T1) Q_n(T2) for the factorization T = T1 T2; an upper bound on P_n(T), never the infimum."""

    if target is not None:
        product = T1.matrix @ T2.matrix
        gap = max_abs(product - target.matrix)
        if gap > FACTORIZATION_TOL * max(max_abs(target.matrix), 1.0):
            raise FactorizationError(f"T1 T2 differs from T by {gap:.3e}")
    return UpperBound(value=qn_norm(T1, D, p, n) * qn_norm(T2, D, p, n), level=D.dim)


def best_p1_upper_bound(
    factorizations: Sequence[Tuple[TruncatedOperator, TruncatedOperator]],
    D: TruncatedOperator,
    p: float,
    n: int,
    target: Optional[TruncatedOperator] = None,
) -> UpperBound:
    bounds = [p1_upper_bound(T1, T2, D, p, n, target).value for T1, T2 in factorizations]
    if not bounds:
        raise FactorizationError("no factorization supplied")
    return UpperBound(value=min(bounds), factorizations=len(bounds), level=D.dim)


__all__ = [
    "WeightValue",
    "UpperBound",
    "phi_weight",
    "qn_norm",
    "p1_upper_bound",
    "best_p1_upper_bound",
]
