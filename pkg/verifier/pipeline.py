"""Wick pipeline: D_E against the spectral-triple requirements, both spectral-dimension routes compared."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from analysis.order import OrderVerdict, compactness_from_profiles
from analysis.traces import ZetaReport, estimate_from_table, line_spectral_dimension
from core.errors import DomainError
from models.oscillator import gaussian
from shared.config import Tolerances

from .axioms import bounded_columns
from .measure import ANALYTIC_LINE_FAMILIES, LevelMeasurement, ModelBuilder, measure_levels

COMBINATION_TOL = 1e-12


class PipelineReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    commutators: Dict[str, Any]
    compactness: Dict[str, Any]
    mean_square_route: Optional[ZetaReport]
    wick_route: Optional[ZetaReport]
    wick_route_truncated: Optional[ZetaReport] = None
    grid_step: float
    dimensions_agree: bool
    passed: bool
    failures: List[str]


def _route(
    measurements: Sequence[LevelMeasurement],
    s_grid: Sequence[float],
    column: str,
    tol: Tolerances,
    route: str,
) -> Optional[ZetaReport]:
    table = np.array([getattr(m, column) for m in measurements])
    finite_rank = measurements[-1].finite_rank
    rows = measurements[-1:] if finite_rank else measurements
    if finite_rank:
        table = table[-1:]
    try:
        return estimate_from_table([m.level for m in rows], s_grid, table, stab=tol.stab, finite_rank=finite_rank, route=route)
    except DomainError:
        return None


def _agree(first: Optional[ZetaReport], second: Optional[ZetaReport], step: float) -> bool:
    if first is None or second is None or first.estimate is None or second.estimate is None:
        return False
    return abs(first.estimate - second.estimate) <= step + 1e-9


def pipeline_from_measurements(
    measurements: Sequence[LevelMeasurement],
    s_grid: Sequence[float],
    tol: Optional[Tolerances] = None,
    logs: Optional[List[str]] = None,
) -> PipelineReport:
    tol = tol or Tolerances()
    logs = logs if logs is not None else []
    usable = [m for m in measurements if m.ok]
    failures: List[str] = []
    step = float(min(np.diff(s_grid))) if len(s_grid) > 1 else 0.0
    if not usable:
        return PipelineReport(
            commutators={},
            compactness={},
            mean_square_route=None,
            wick_route=None,
            grid_step=step,
            dimensions_agree=False,
            passed=False,
            failures=["construction: no usable truncation level"],
        )

    columns = {f"[D_E,{label}]": [m.commutators[label]["D_E"] for m in usable] for label in usable[-1].samples}
    growth = bounded_columns(usable, columns, tol)
    combination = max(m.commutators[label]["combination_residual"] for m in usable for label in m.samples)
    if growth != OrderVerdict.supported:
        failures.append(f"[D_E, a] growth {growth.value}")
    if combination > COMBINATION_TOL:
        failures.append(f"[D_E, a] differs from the (1+i)/2, (1-i)/2 combination by {combination:.3e}")

    compactness: Dict[str, Any] = {}
    for label in usable[-1].samples:
        evidence = compactness_from_profiles(
            label,
            [m.level for m in usable],
            [m.profiles[f"wick:{label}"] for m in usable],
            tol.decay,
            tol.sv_stab,
            usable[-1].finite_rank,
        )
        compactness[label] = evidence.model_dump(mode="json")
        if not evidence.passed:
            failures.append(f"a(1+D_E^2)^-1/2 not compact for {label}")

    mean_route = _route(usable, s_grid, "zeta_mean_square", tol, "mean-square")
    truncated = _route(usable, s_grid, "zeta_wick", tol, "wick-truncated")
    if usable[-1].family in ANALYTIC_LINE_FAMILIES:
        wick_route = line_spectral_dimension(s_grid, gaussian)
        truncated = truncated.model_copy(update={"experimental": True}) if truncated is not None else None
    else:
        wick_route, truncated = truncated, None

    agree = _agree(mean_route, wick_route, step)
    if not agree:
        failures.append(
            "spectral dimension routes disagree: "
            f"<D> route {mean_route.estimate if mean_route else None}, D_E route {wick_route.estimate if wick_route else None}"
        )
    logs.append(
        f"Pipeline: dimension <D> route {mean_route.estimate if mean_route else None}, "
        f"D_E route {wick_route.estimate if wick_route else None}"
    )
    return PipelineReport(
        commutators={"norms": columns, "growth": growth.value, "combination_residual": combination},
        compactness=compactness,
        mean_square_route=mean_route,
        wick_route=wick_route,
        wick_route_truncated=truncated,
        grid_step=step,
        dimensions_agree=agree,
        passed=not failures,
        failures=failures,
    )


def wick_pipeline_check(
    builder: ModelBuilder,
    levels: Sequence[int],
    s_grid: Sequence[float],
    tolerances: Optional[Tolerances] = None,
    threads: Optional[int] = None,
    logs: Optional[List[str]] = None,
    measurements: Optional[Sequence[LevelMeasurement]] = None,
) -> PipelineReport:
    if measurements is None:
        measurements = measure_levels(builder, levels, s_grid, threads, logs)
    return pipeline_from_measurements(measurements, s_grid, tolerances, logs)


__all__ = ["PipelineReport", "pipeline_from_measurements", "wick_pipeline_check"]
