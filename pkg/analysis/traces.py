"""Heat and zeta traces, the Mellin cross-check and spectral-dimension estimation.

Traces are exact finite sums over the eigendecomposition of H:
Trace(a f(H)) = sum_k f(lambda_k) <v_k, a v_k>.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import quad, trapezoid
from scipy.special import gamma

from core.errors import DomainError
from core.linalg import dagger
from core.types import BasisKind, TruncatedOperator
from shared.sweep import parallel_map

DEFAULT_STAB = 1e-3
MELLIN_TOL = 1e-5
MELLIN_T_MIN = 1e-12
MELLIN_T_MAX = 50.0
MELLIN_POINTS = 4000

TracePair = Tuple[TruncatedOperator, TruncatedOperator]


class StabilizationMethod(str, Enum):
    increment = "increment"
    relative = "relative"


class DimensionVerdict(str, Enum):
    estimated = "estimated"
    zero = "dimension 0 at desk scale"
    inconclusive = "inconclusive"


class ZetaCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: float
    level: Optional[int]
    value: Optional[float]
    stabilized: bool


class ZetaReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    route: str
    method: str
    levels: List[int]
    s_grid: List[float]
    cells: List[ZetaCell]
    stabilized: List[bool]
    rates: List[Optional[float]]
    estimate: Optional[float]
    bracket: Optional[List[float]]
    verdict: DimensionVerdict
    experimental: bool = False

    def traces_at(self, level: int) -> List[Optional[float]]:
        return [cell.value for cell in self.cells if cell.level == level]


class MellinCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    s: float
    zeta: float
    mellin: float
    discrepancy: float
    tail: float
    converged: bool


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")
    return value


def eigen_weights(a: TruncatedOperator, H: TruncatedOperator) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of H (clipped at 0) and the diagonal of a in H's eigenbasis."""

    H.require_same_space(a)
    values, vectors = H.eigensystem()
    coefficients = np.real(np.einsum("ij,ji->i", dagger(vectors) @ a.matrix, vectors))
    return np.clip(values, 0.0, None), coefficients


def heat_trace(a: TruncatedOperator, H: TruncatedOperator, t: float) -> float:
    t = _require_positive("heat time t", t)
    values, coefficients = eigen_weights(a, H)
    return float(np.sum(coefficients * np.exp(-t * values)))


def zeta_trace(a: TruncatedOperator, H: TruncatedOperator, s: float) -> float:
    s = _require_positive("zeta exponent s", s)
    values, coefficients = eigen_weights(a, H)
    return float(np.sum(coefficients * np.power(1.0 + values, -s / 2.0)))


def zeta_traces(a: TruncatedOperator, H: TruncatedOperator, s_grid: Sequence[float]) -> List[float]:
    for s in s_grid:
        _require_positive("zeta exponent s", s)
    values, coefficients = eigen_weights(a, H)
    log_weight = np.log1p(values)
    exponents = -0.5 * np.asarray(s_grid, dtype=float)
    return [float(v) for v in np.exp(np.outer(exponents, log_weight)) @ coefficients]


def mellin_cross_check(
    a: TruncatedOperator,
    H: TruncatedOperator,
    s: float,
    t_min: float = MELLIN_T_MIN,
    t_max: float = MELLIN_T_MAX,
    points: int = MELLIN_POINTS,
    tol: float = MELLIN_TOL,
) -> MellinCheck:
    """Zeta value from (1/Gamma(s/2)) int t^{s/2-1} e^{-t} Trace(a e^{-tH}) dt.

    The integral runs in u = ln t by the trapezoid rule; the piece below
    t_min is added in closed form and its size is the reported tail.
    Non-convergence is flagged through ``converged``.
    """

    s = _require_positive("zeta exponent s", s)
    values, coefficients = eigen_weights(a, H)
    u = np.linspace(math.log(t_min), math.log(t_max), points)
    t = np.exp(u)
    heat = np.exp(-np.outer(t, values)) @ coefficients
    integrand = np.exp(0.5 * s * u - t) * heat
    half = 0.5 * s
    tail = float(np.sum(coefficients)) * t_min**half / (half * gamma(half))
    mellin = float(trapezoid(integrand, u) / gamma(half)) + tail
    zeta = float(np.sum(coefficients * np.power(1.0 + values, -half)))
    scale = max(abs(zeta), np.finfo(float).tiny)
    discrepancy = abs(mellin - zeta) / scale
    converged = discrepancy <= tol and abs(tail) <= tol * scale
    return MellinCheck(s=s, zeta=zeta, mellin=mellin, discrepancy=discrepancy, tail=tail, converged=converged)


def _line_integral(g: Callable[[float], float]) -> float:
    value, _ = quad(g, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-13, limit=400)
    return float(value)


def line_trace_constant(s: float) -> float:
    """Gamma(s/2 - 1/2) / (2 sqrt(pi) Gamma(s/2)); finite only for s > 1."""

    s = float(s)
    if not s > 1:
        raise DomainError(f"line-model trace diverges for s <= 1, got {s}")
    return float(gamma(0.5 * s - 0.5) / (2.0 * math.sqrt(math.pi) * gamma(0.5 * s)))


def line_zeta_trace(g: Callable[[float], float], s: float, integral: Optional[float] = None) -> float:
    """Trace(g (1+D_E^2)^{-s/2}) for D_E = i d/dx + x, via the closed-form kernel constant."""

    constant = line_trace_constant(s)
    return constant * (integral if integral is not None else _line_integral(g))


def line_zeta_fourier(g: Callable[[float], float], s: float) -> float:
    """Oracle: (1/2pi) int (1+xi^2)^{-s/2} dxi times int g."""

    s = float(s)
    if not s > 1:
        raise DomainError(f"line-model trace diverges for s <= 1, got {s}")
    momentum, _ = quad(lambda xi: (1.0 + xi * xi) ** (-0.5 * s), -np.inf, np.inf, epsabs=1e-13, epsrel=1e-13, limit=400)
    return float(momentum / (2.0 * math.pi)) * _line_integral(g)


def s_grid_from_range(start: float, stop: float, step: float) -> List[float]:
    if not step > 0 or stop < start:
        raise DomainError(f"invalid s-grid {start}:{stop}:{step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def _suffix_estimate(s_grid: Sequence[float], stabilized: Sequence[bool]) -> Tuple[Optional[float], Optional[List[float]]]:
    index = len(stabilized)
    while index > 0 and stabilized[index - 1]:
        index -= 1
    if index == len(stabilized):
        return None, None
    lower = s_grid[index - 1] if index > 0 else 0.0
    return s_grid[index], [lower, s_grid[index]]


def _increment_flags(table: np.ndarray, levels: Sequence[int], stab: float) -> Tuple[List[bool], List[bool], List[Optional[float]]]:
    n1, n2, n3 = levels[-3:]
    t1, t2, t3 = table[-3], table[-2], table[-1]
    inc_lo = t2 - t1
    inc_hi = t3 - t2
    converged: List[bool] = []
    stabilized: List[bool] = []
    rates: List[Optional[float]] = []
    for lo, hi, top in zip(inc_lo, inc_hi, t3):
        done = abs(hi) <= stab * abs(top)
        rate: Optional[float] = None
        if lo != 0.0:
            rate = float((hi / math.log(n3 / n2)) / (lo / math.log(n2 / n1)))
        converged.append(bool(done))
        stabilized.append(bool(done or (rate is not None and rate <= 1.0)))
        rates.append(rate)
    return converged, stabilized, rates


def estimate_from_table(
    levels: Sequence[int],
    s_grid: Sequence[float],
    table: np.ndarray,
    method: StabilizationMethod = StabilizationMethod.increment,
    stab: float = DEFAULT_STAB,
    finite_rank: bool = False,
    route: str = "mean-square",
) -> ZetaReport:
    """Stabilization verdicts for a (level x s) trace table."""

    method = StabilizationMethod(method)
    table = np.asarray(table, dtype=float)
    levels = list(levels)
    if finite_rank:
        converged = [True] * len(s_grid)
        stabilized = list(converged)
        rates: List[Optional[float]] = [None] * len(s_grid)
    elif len(levels) < 3:
        raise DomainError(f"spectral dimension needs at least 3 truncation levels, got {levels}")
    elif method == StabilizationMethod.increment:
        converged, stabilized, rates = _increment_flags(table, levels, stab)
    else:
        top, prev = table[-1], table[-2]
        stabilized = [bool(abs(hi - lo) < stab * abs(hi)) for hi, lo in zip(top, prev)]
        converged = list(stabilized)
        rates = [None] * len(s_grid)

    estimate, bracket = _suffix_estimate(s_grid, stabilized)
    if estimate is None:
        verdict = DimensionVerdict.inconclusive
    elif all(converged):
        verdict = DimensionVerdict.zero
    else:
        verdict = DimensionVerdict.estimated

    cells = [
        ZetaCell(s=float(s), level=int(level), value=float(table[i, j]), stabilized=stabilized[j])
        for j, s in enumerate(s_grid)
        for i, level in enumerate(levels)
    ]
    return ZetaReport(
        route=route,
        method=method.value,
        levels=levels,
        s_grid=[float(s) for s in s_grid],
        cells=cells,
        stabilized=stabilized,
        rates=rates,
        estimate=estimate,
        bracket=bracket,
        verdict=verdict,
    )


def spectral_dimension_estimate(
    pairs: Sequence[TracePair],
    s_grid: Sequence[float],
    method: StabilizationMethod = StabilizationMethod.increment,
    stab: float = DEFAULT_STAB,
    threads: Optional[int] = None,
    route: str = "mean-square",
) -> ZetaReport:
    """Estimate the spectral dimension from (a, H) pairs at strictly increasing levels.

    The estimate is the smallest s from which every larger grid point is
    stabilized; the bracket is [previous grid point, estimate].
    """

    if not pairs:
        raise DomainError("spectral dimension needs at least one truncation level")
    finite_rank = pairs[-1][1].basis.kind == BasisKind.abstract
    if finite_rank:
        pairs = list(pairs[-1:])
    levels = [H.dim for _, H in pairs]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise DomainError(f"truncation levels must be strictly increasing, got {levels}")
    rows = parallel_map(lambda pair: zeta_traces(pair[0], pair[1], s_grid), list(pairs), threads)
    return estimate_from_table(levels, s_grid, np.array(rows), method, stab, finite_rank, route)


def line_spectral_dimension(
    s_grid: Sequence[float],
    g: Optional[Callable[[float], float]] = None,
) -> ZetaReport:
    """Analytic route for D_E = i d/dx + x: the trace is finite exactly for s > 1."""

    g = g or (lambda x: 1.0 / (1.0 + x * x))
    integral = _line_integral(g)
    cells: List[ZetaCell] = []
    stabilized: List[bool] = []
    for s in s_grid:
        finite = s > 1
        value = line_zeta_trace(g, s, integral) if finite else None
        cells.append(ZetaCell(s=float(s), level=None, value=value, stabilized=finite))
        stabilized.append(finite)
    estimate, bracket = _suffix_estimate(s_grid, stabilized)
    return ZetaReport(
        route="analytic",
        method="closed-form",
        levels=[],
        s_grid=[float(s) for s in s_grid],
        cells=cells,
        stabilized=stabilized,
        rates=[None] * len(stabilized),
        estimate=estimate,
        bracket=bracket,
        verdict=DimensionVerdict.estimated if estimate is not None else DimensionVerdict.inconclusive,
    )


def convergence_rows(model: str, quantity: str, report: ZetaReport) -> List[Tuple[str, str, float, Optional[int], Optional[float], bool]]:
    """CSV rows (model, quantity, s, N, value, stabilized_flag) sorted by (quantity, s, N)."""

    rows = [(model, quantity, cell.s, cell.level, cell.value, cell.stabilized) for cell in report.cells]
    return sorted(rows, key=lambda row: (row[1], row[2], -1 if row[3] is None else row[3]))


__all__ = [
    "StabilizationMethod",
    "DimensionVerdict",
    "ZetaCell",
    "ZetaReport",
    "MellinCheck",
    "eigen_weights",
    "heat_trace",
    "zeta_trace",
    "zeta_traces",
    "mellin_cross_check",
    "line_trace_constant",
    "line_zeta_trace",
    "line_zeta_fourier",
    "s_grid_from_range",
    "estimate_from_table",
    "spectral_dimension_estimate",
    "line_spectral_dimension",
    "convergence_rows",
]
