"""Desk-scale evidence for pseudodifferential order and compactness.

Order r membership is read off the growth of ||delta^k((1+<D>^2)^{-r/2} T)||
across truncation levels; compactness off singular-value decay with
stabilization of the leading singular values.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.linalg import svdvals

from core.errors import DomainError, GrowthGuardError
from core.linalg import dagger, is_diagonal
from core.operators import BULK_MARGIN, adjoint, commutator_op, compressed_norm
from core.types import BasisKind, TruncatedOperator
from models.types import ModelTriple

DEFAULT_GROWTH = 0.05
DEFAULT_DECAY = 0.1
DEFAULT_SV_STAB = 0.05
LEADING_SINGULAR_VALUES = 16
ZERO_NORM = 1e-10
RELATIVE_ZERO = 1e-8
MAX_SN_DEPTH = 3


class OrderVerdict(str, Enum):
    supported = "supported"
    refuted = "refuted"
    inconclusive = "inconclusive"


class OrderEvidence(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    order: float
    k_max: int
    levels: List[int]
    norms: List[List[float]]
    ratios: List[List[float]]
    verdict: OrderVerdict
    growth_tol: float
    note: str = ""


class CompactnessEvidence(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    levels: List[int]
    sigma_1: List[float]
    sigma_quarter: List[float]
    leading_drift: Optional[float]
    decay_passed: bool
    stable: Optional[bool]
    passed: bool
    note: str = ""


def order_norms(
    T: TruncatedOperator,
    mean_square: TruncatedOperator,
    r: float,
    k_max: int,
    margin: int = BULK_MARGIN,
) -> List[float]:
    """||delta^k((1+<D>^2)^{-r/2} T)|| on the low-energy block for k = 0..k_max.

    margin is the number of trailing Hermite indices dropped; it must cover the
    band that truncation errors of T spread over.
    """

    mean_square.require_same_space(T)
    values, vectors = mean_square.eigensystem()
    root = np.sqrt(1.0 + np.clip(values, 0.0, None))
    diagonal = is_diagonal(np.asarray(mean_square.matrix))
    local = np.asarray(T.matrix) if diagonal else dagger(vectors) @ T.matrix @ vectors
    local = np.power(root, -r)[:, None] * local
    gap = root[:, None] - root[None, :]
    norms: List[float] = []
    for k in range(k_max + 1):
        term = local if k == 0 else local * gap**k
        back = term if diagonal else vectors @ term @ dagger(vectors)
        norms.append(compressed_norm(back, T.basis, margin))
    return norms


def _ratio(lo: float, hi: float, floor: float) -> float:
    if lo <= floor:
        return 1.0 if hi <= floor else math.inf
    return hi / lo


def zero_floor(norms: Sequence[Sequence[float]]) -> float:
    """Norms below this are round-off: RELATIVE_ZERO times the largest entry, never under ZERO_NORM."""

    scale = max((float(value) for row in norms for value in row if math.isfinite(value)), default=0.0)
    return max(ZERO_NORM, RELATIVE_ZERO * scale)


def growth_ratios(norms: Sequence[Sequence[float]], floor: float = ZERO_NORM) -> List[List[float]]:
    """Successive-level ratios per column; two vanishing norms count as bounded."""

    table = [list(row) for row in norms]
    return [[_ratio(lo, hi, floor) for lo, hi in zip(prev, cur)] for prev, cur in zip(table, table[1:])]


def growth_verdict(ratios: Sequence[Sequence[float]], growth_tol: float) -> OrderVerdict:
    last = [list(row) for row in ratios[-2:]]
    if not last:
        return OrderVerdict.inconclusive
    limit = 1.0 + growth_tol
    if all(value <= limit for row in last for value in row):
        return OrderVerdict.supported
    if len(last) == 2 and any(lo > limit and hi > limit for lo, hi in zip(*last)):
        return OrderVerdict.refuted
    return OrderVerdict.inconclusive


def evidence_from_norms(
    label: str,
    levels: Sequence[int],
    norms: Sequence[Sequence[float]],
    r: float,
    k_max: int,
    growth_tol: float = DEFAULT_GROWTH,
    finite_rank: bool = False,
) -> OrderEvidence:
    ratios = growth_ratios(norms, zero_floor(norms))
    if finite_rank:
        verdict, note = OrderVerdict.supported, "finite-rank"
    elif len(levels) < 3:
        verdict, note = OrderVerdict.inconclusive, "fewer than three truncation levels"
    else:
        verdict, note = growth_verdict(ratios, growth_tol), ""
    return OrderEvidence(
        label=label,
        order=float(r),
        k_max=k_max,
        levels=list(levels),
        norms=[list(row) for row in norms],
        ratios=ratios,
        verdict=verdict,
        growth_tol=growth_tol,
        note=note,
    )


def order_evidence(
    pairs: Sequence[Tuple[TruncatedOperator, TruncatedOperator]],
    r: float,
    k_max: int = 2,
    growth_tol: float = DEFAULT_GROWTH,
    label: str = "",
    margin: int = BULK_MARGIN,
) -> OrderEvidence:
    """Evidence that T lies in OP^r(<D>), from (T, <D>^2) pairs at increasing levels."""

    if not pairs:
        raise DomainError("order evidence needs at least one truncation level")
    if k_max < 0:
        raise DomainError(f"delta depth must be nonnegative, got {k_max}")
    levels = [T.dim for T, _ in pairs]
    norms = [order_norms(T, H, r, k_max, margin) for T, H in pairs]
    finite_rank = pairs[-1][0].basis.kind == BasisKind.abstract
    return evidence_from_norms(label or pairs[-1][0].label, levels, norms, r, k_max, growth_tol, finite_rank)


def singular_profile(T: TruncatedOperator, leading: int = LEADING_SINGULAR_VALUES) -> Tuple[float, float, List[float]]:
    """(sigma_1, sigma at index ceil(N/4), leading singular values)."""

    sigma = svdvals(np.asarray(T.matrix))
    quarter = sigma[max(math.ceil(T.dim / 4) - 1, 0)]
    return float(sigma[0]), float(quarter), [float(v) for v in sigma[:leading]]


def compactness_from_profiles(
    label: str,
    levels: Sequence[int],
    profiles: Sequence[Tuple[float, float, List[float]]],
    decay_tol: float = DEFAULT_DECAY,
    sv_stab: float = DEFAULT_SV_STAB,
    finite_rank: bool = False,
) -> CompactnessEvidence:
    sigma_1 = [p[0] for p in profiles]
    quarter = [p[1] for p in profiles]
    top = sigma_1[-1]
    drift: Optional[float] = None
    stable: Optional[bool] = None
    if finite_rank or top <= ZERO_NORM:
        return CompactnessEvidence(
            label=label,
            levels=list(levels),
            sigma_1=sigma_1,
            sigma_quarter=quarter,
            leading_drift=None,
            decay_passed=True,
            stable=None,
            passed=True,
            note="finite-rank" if finite_rank else "zero operator",
        )
    decay_passed = quarter[-1] <= decay_tol * top
    if len(profiles) >= 2:
        hi, lo = profiles[-1][2], profiles[-2][2]
        count = min(len(hi), len(lo))
        drift = max(abs(a - b) for a, b in zip(hi[:count], lo[:count])) / top
        stable = drift <= sv_stab
    return CompactnessEvidence(
        label=label,
        levels=list(levels),
        sigma_1=sigma_1,
        sigma_quarter=quarter,
        leading_drift=drift,
        decay_passed=decay_passed,
        stable=stable,
        passed=decay_passed and stable is not False,
    )


def compactness_evidence(
    operators: Sequence[TruncatedOperator],
    decay_tol: float = DEFAULT_DECAY,
    sv_stab: float = DEFAULT_SV_STAB,
    label: str = "",
) -> CompactnessEvidence:
    if not operators:
        raise DomainError("compactness evidence needs at least one truncation level")
    levels = [T.dim for T in operators]
    profiles = [singular_profile(T) for T in operators]
    finite_rank = operators[-1].basis.kind == BasisKind.abstract
    return compactness_from_profiles(label or operators[-1].label, levels, profiles, decay_tol, sv_stab, finite_rank)


def sn_margin(depth: int) -> int:
    """Hermite bulk margin for S^depth elements; each commutator with <D>^2 or R_D widens the truncation band."""

    return BULK_MARGIN * (depth + 2)


def sn_generate(model: ModelTriple, n: int) -> List[TruncatedOperator]:
    """S^0 = A u [D, A] u [D*, A]; S^n = [<D>^2, S^{n-1}] u [R_D, S^{n-1}].

    Labels record the commutator chain that produced each element.
    """

    if n < 0:
        raise DomainError(f"S^n depth must be nonnegative, got {n}")
    if n > MAX_SN_DEPTH:
        raise GrowthGuardError(f"S^n depth {n} exceeds the limit {MAX_SN_DEPTH}")
    D = model.D.with_matrix(model.D.matrix, "D")
    D_star = adjoint(D)
    current: List[TruncatedOperator] = []
    for sample in model.algebra_samples:
        a = sample.operator.with_matrix(sample.operator.matrix, sample.label)
        current.append(a)
        current.append(commutator_op(D, a))
        current.append(commutator_op(D_star, a))
    mean_square = model.derived.mean_square.with_matrix(model.derived.mean_square.matrix, "<D>^2")
    defect = model.derived.curvature_defect.with_matrix(model.derived.curvature_defect.matrix, "R_D")
    for _ in range(n):
        current = [commutator_op(mean_square, T) for T in current] + [commutator_op(defect, T) for T in current]
    return current


__all__ = [
    "DEFAULT_GROWTH",
    "DEFAULT_DECAY",
    "DEFAULT_SV_STAB",
    "ZERO_NORM",
    "RELATIVE_ZERO",
    "MAX_SN_DEPTH",
    "OrderVerdict",
    "OrderEvidence",
    "CompactnessEvidence",
    "order_norms",
    "zero_floor",
    "growth_ratios",
    "growth_verdict",
    "evidence_from_norms",
    "order_evidence",
    "singular_profile",
    "compactness_from_profiles",
    "compactness_evidence",
    "sn_margin",
    "sn_generate",
]
