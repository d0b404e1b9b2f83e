"""Per-level measurements shared by the axiom audit and the Wick pipeline check.

Each truncation level is measured independently; the audit and the pipeline
are deterministic reductions over the resulting list.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from analysis.order import order_norms, singular_profile, sn_generate, sn_margin
from analysis.traces import zeta_traces
from core.errors import WickrotError
from core.linalg import dagger, frobenius_relative, hermitian_residual
from core.operators import compressed_norm, func_calculus, resolvent_power, universal_bounds, wick_residuals
from core.types import BasisKind, TruncatedOperator
from models.types import ModelFamily, ModelTriple
from shared.sweep import parallel_map

ModelBuilder = Callable[[int], ModelTriple]

RATIO_EXPONENTS = (0.5, 1.0, 2.0)
SN_DEPTH = 2
ANALYTIC_LINE_FAMILIES = (ModelFamily.oscillator, ModelFamily.line)

# name -> (claimed order, delta depth)
ORDER_CHECKS: Dict[str, Tuple[float, int]] = {
    "R_D": (2.0, 2),
    "[<D>^2,R_D]": (2.0, 2),
    "1+D_E^2": (2.0, 1),
    "(1+D_E^2)^-1": (-2.0, 1),
    "(1+<D>^2)(1+D_E^2)^-1": (0.0, 1),
    "(1+a)^-1": (0.0, 2),
}


class LevelMeasurement(BaseModel):
    model_config = ConfigDict(frozen=True)

    level: int
    error: Optional[str] = None
    family: Optional[ModelFamily] = None
    finite_rank: bool = False
    samples: List[str] = Field(default_factory=list)
    universal: List[float] = Field(default_factory=list)
    wick: Dict[str, float] = Field(default_factory=dict)
    wick_hermitian: float = 0.0
    min_mean_square: float = 0.0
    commutators: Dict[str, Dict[str, float]] = Field(default_factory=dict)
    order: Dict[str, List[float]] = Field(default_factory=dict)
    sn_order: Dict[str, List[float]] = Field(default_factory=dict)
    profiles: Dict[str, Tuple[float, float, List[float]]] = Field(default_factory=dict)
    ratios: Dict[str, float] = Field(default_factory=dict)
    zeta_mean_square: List[float] = Field(default_factory=list)
    zeta_wick: List[float] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None


def _commutator_norms(model: ModelTriple) -> Dict[str, Dict[str, float]]:
    d = model.D.matrix
    dd = dagger(d)
    de = model.derived.wick_plus.matrix
    result: Dict[str, Dict[str, float]] = {}
    for sample in model.algebra_samples:
        a = sample.operator.matrix
        with_d = d @ a - a @ d
        with_dd = dd @ a - a @ dd
        with_de = de @ a - a @ de
        combination = 0.5 * (1 + 1j) * with_d + 0.5 * (1 - 1j) * with_dd
        result[sample.label] = {
            "D": compressed_norm(with_d, model.basis),
            "D*": compressed_norm(with_dd, model.basis),
            "D_E": compressed_norm(with_de, model.basis),
            "combination_residual": frobenius_relative(with_de, combination),
        }
    return result


def _wick_power(model: ModelTriple, exponent: float) -> TruncatedOperator:
    return func_calculus(model.derived.wick_plus, lambda w: np.power(1.0 + w * w, exponent), f"(1+D_E^2)^{exponent:g}")


def measure_level(model: ModelTriple, s_grid: Sequence[float] = ()) -> LevelMeasurement:
    derived = model.derived
    msq = derived.mean_square
    rd = derived.curvature_defect

    universal = list(universal_bounds(model.D, derived))
    wick = wick_residuals(derived)
    values, _ = msq.eigensystem()

    order: Dict[str, List[float]] = {}
    one_plus_wick = msq.with_matrix(np.eye(model.level) + derived.wick_plus.matrix @ derived.wick_plus.matrix, "1+D_E^2")
    inverse_wick = _wick_power(model, -1.0)
    convert = msq.with_matrix(resolvent_power(msq, 1.0).matrix @ inverse_wick.matrix, "(1+<D>^2)(1+D_E^2)^-1")
    first = model.algebra_samples[0].operator
    inverse_local = msq.with_matrix(np.linalg.inv(np.eye(model.level) + first.matrix), "(1+a)^-1")
    operators = {
        "R_D": rd,
        "[<D>^2,R_D]": msq.with_matrix(msq.matrix @ rd.matrix - rd.matrix @ msq.matrix, "[<D>^2,R_D]"),
        "1+D_E^2": one_plus_wick,
        "(1+D_E^2)^-1": inverse_wick,
        "(1+<D>^2)(1+D_E^2)^-1": convert,
        "(1+a)^-1": inverse_local,
    }
    for name, (r, k_max) in ORDER_CHECKS.items():
        order[name] = order_norms(operators[name], msq, r, k_max)

    sn_order: Dict[str, List[float]] = {}
    for depth in range(SN_DEPTH + 1):
        for index, element in enumerate(sn_generate(model, depth)):
            sn_order[f"S^{depth}[{index}] {element.label}"] = order_norms(element, msq, float(depth), 0, sn_margin(depth))

    weight_half = resolvent_power(msq, -0.5).matrix
    weight_one = resolvent_power(msq, -1.0).matrix
    wick_half = _wick_power(model, -0.5).matrix
    profiles: Dict[str, Tuple[float, float, List[float]]] = {}
    for sample in model.algebra_samples:
        a = sample.operator.matrix
        profiles[f"2b:{sample.label}"] = singular_profile(msq.with_matrix(a @ rd.matrix @ weight_one, ""))
        profiles[f"4:{sample.label}"] = singular_profile(msq.with_matrix(a @ weight_half, ""))
        profiles[f"wick:{sample.label}"] = singular_profile(msq.with_matrix(a @ wick_half, ""))

    ratios: Dict[str, float] = {}
    for s in RATIO_EXPONENTS:
        mean_plus = resolvent_power(msq, s).matrix
        mean_minus = resolvent_power(msq, -s).matrix
        wick_plus = _wick_power(model, s).matrix
        wick_minus = _wick_power(model, -s).matrix
        ratios[f"(1+<D>^2)^-{s:g}(1+D_E^2)^{s:g}"] = compressed_norm(mean_minus @ wick_plus, model.basis)
        ratios[f"(1+D_E^2)^{s:g}(1+<D>^2)^-{s:g}"] = compressed_norm(wick_plus @ mean_minus, model.basis)
        ratios[f"(1+<D>^2)^{s:g}(1+D_E^2)^-{s:g}"] = compressed_norm(mean_plus @ wick_minus, model.basis)
        ratios[f"(1+D_E^2)^-{s:g}(1+<D>^2)^{s:g}"] = compressed_norm(wick_minus @ mean_plus, model.basis)
    ratios["convert_smooth"] = compressed_norm(convert.matrix, model.basis)

    zeta_mean: List[float] = []
    zeta_wick: List[float] = []
    if s_grid:
        wick_square = msq.with_matrix(derived.wick_plus.matrix @ derived.wick_plus.matrix, "D_E^2")
        zeta_mean = zeta_traces(first, msq, s_grid)
        zeta_wick = zeta_traces(first, wick_square, s_grid)

    return LevelMeasurement(
        level=model.level,
        family=model.family,
        finite_rank=model.basis.kind == BasisKind.abstract,
        samples=[sample.label for sample in model.algebra_samples],
        universal=universal,
        wick=wick,
        wick_hermitian=hermitian_residual(derived.wick_plus.matrix),
        min_mean_square=float(np.min(values)) if values.size else 0.0,
        commutators=_commutator_norms(model),
        order=order,
        sn_order=sn_order,
        profiles=profiles,
        ratios=ratios,
        zeta_mean_square=zeta_mean,
        zeta_wick=zeta_wick,
    )


def _measure_safely(builder: ModelBuilder, level: int, s_grid: Sequence[float]) -> LevelMeasurement:
    try:
        return measure_level(builder(level), s_grid)
    except WickrotError as exc:
        return LevelMeasurement(level=level, error=f"{type(exc).__name__}: {exc}")


def measure_levels(
    builder: ModelBuilder,
    levels: Sequence[int],
    s_grid: Sequence[float] = (),
    threads: Optional[int] = None,
    logs: Optional[List[str]] = None,
) -> List[LevelMeasurement]:
    """Measure every level; construction failures are recorded per level, never raised."""

    measurements = parallel_map(lambda level: _measure_safely(builder, level, s_grid), list(levels), threads)
    if logs is not None:
        for item in measurements:
            if item.ok:
                logs.append(f"Verifier: measured N={item.level}")
            else:
                logs.append(f"Verifier: level N={item.level} failed ({item.error})")
    return measurements


__all__ = [
    "ModelBuilder",
    "RATIO_EXPONENTS",
    "SN_DEPTH",
    "ORDER_CHECKS",
    "ANALYTIC_LINE_FAMILIES",
    "LevelMeasurement",
    "measure_level",
    "measure_levels",
]
