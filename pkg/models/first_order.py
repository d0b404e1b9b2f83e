"""Constant-coefficient first-order operators on a periodic Fourier grid.

The torus [-L, L)^n stands in for R^n. Derivatives are exact on the
resolved modes; the Nyquist mode is dropped so d/dx stays real and skew.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import dft, svdvals

from core.errors import ModelConstructionError
from core.linalg import anticommutator, commutator, dagger, frobenius_relative, max_abs
from core.operators import wick_rotate
from core.types import BasisKind, BasisSpec

from .assembly import assemble
from .types import ConditionReport, ConditionResult, FirstOrderSpec, ModelFamily, ModelTriple

MAX_DIMENSION = 2**22
INVERTIBILITY_TOL = 1e-10
RESIDUAL_TOL = 1e-12
DEFAULT_SEED = 7
BUMP_WIDTHS = (1.0, 0.5)

CONDITION_NAMES = ("invertible_symbol", "anticommutators", "mass_commutes", "smooth_M", "smooth_K")


def grid_nodes(points: int, half_period: float) -> np.ndarray:
    return -half_period + 2.0 * half_period * np.arange(points) / points


def fourier_derivative(points: int, half_period: float) -> np.ndarray:
    F = dft(points, scale="sqrtn")
    xi = (np.pi / half_period) * np.fft.fftfreq(points, d=1.0 / points)
    if points % 2 == 0:
        xi[points // 2] = 0.0
    matrix = (dagger(F) @ (1j * xi[:, None] * F)).real
    return (0.5 * (matrix - matrix.T)).astype(np.complex128)


def _axis_operator(op: np.ndarray, axis: int, points: int, spatial_dim: int) -> np.ndarray:
    factors = [np.eye(points) if j != axis else op for j in range(spatial_dim)]
    return reduce(np.kron, factors, np.eye(1))


def bump(width: float, half_period: float) -> Callable[[np.ndarray], np.ndarray]:
    def _b(x: np.ndarray) -> np.ndarray:
        return np.exp((np.cos(np.pi * x / half_period) - 1.0) / width)

    return _b


def _grid_function(f: Callable[[np.ndarray], np.ndarray], spec: FirstOrderSpec) -> np.ndarray:
    nodes = grid_nodes(spec.points, spec.half_period)
    mesh = np.meshgrid(*([nodes] * spec.spatial_dim), indexing="ij")
    values = np.ones_like(mesh[0])
    for axis_values in mesh:
        values = values * f(axis_values)
    return values.ravel()


def _assemble_symbol(spec: FirstOrderSpec, M: List[np.ndarray], K: np.ndarray) -> np.ndarray:
    derivative = fourier_derivative(spec.points, spec.half_period)
    grid_dim = spec.points**spec.spatial_dim
    D = np.kron(np.eye(grid_dim), K)
    for axis, Mj in enumerate(M):
        D = D + np.kron(_axis_operator(derivative, axis, spec.points, spec.spatial_dim), Mj)
    return D


def first_order_model(spec: FirstOrderSpec) -> ModelTriple:
    if spec.level > MAX_DIMENSION:
        raise ModelConstructionError(f"first-order level {spec.level} exceeds the dense limit {MAX_DIMENSION}")
    D = _assemble_symbol(spec, spec.M, spec.K)
    fiber = np.eye(spec.fiber_dim)
    samples = [
        (f"bump(w={w:g})", np.kron(np.diag(_grid_function(bump(w, spec.half_period), spec)), fiber).astype(np.complex128))
        for w in BUMP_WIDTHS
    ]
    basis = BasisSpec(
        kind=BasisKind.fourier_grid,
        level=spec.level,
        half_period=spec.half_period,
        points_per_axis=spec.points,
        spatial_dim=spec.spatial_dim,
        fiber_dim=spec.fiber_dim,
    )
    return assemble(D, basis, ModelFamily.first_order, samples, metadata={"points": spec.points})


def points_for_level(spec: FirstOrderSpec, level: int) -> int:
    per_fiber, rem = divmod(level, spec.fiber_dim)
    points = round(per_fiber ** (1.0 / spec.spatial_dim)) if per_fiber > 0 else 0
    if rem or points < 2 or points**spec.spatial_dim != per_fiber or points & (points - 1):
        raise ModelConstructionError(
            f"level {level} is not (2^k)^{spec.spatial_dim} x {spec.fiber_dim} for this first-order spec"
        )
    return points


def first_order_at_level(spec: FirstOrderSpec, level: int) -> ModelTriple:
    return first_order_model(spec.with_points(points_for_level(spec, level)))


def wick_symbol(spec: FirstOrderSpec) -> Tuple[List[np.ndarray], np.ndarray]:
    """Coefficients of D_E: M~_j = (M_j - M_j*)/2 + (i/2)(M_j + M_j*), K~ = (K + K*)/2 + (i/2)(K - K*)."""

    M_tilde = [0.5 * (m - dagger(m)) + 0.5j * (m + dagger(m)) for m in spec.M]
    K = spec.K
    K_tilde = 0.5 * (K + dagger(K)) + 0.5j * (K - dagger(K))
    return M_tilde, K_tilde


def first_order_wick_check(spec: FirstOrderSpec, points: Optional[int] = None) -> float:
    """Relative Frobenius gap between wick_rotate(D) and the operator assembled from the rotated symbol."""

    if points is not None:
        spec = spec.with_points(points)
    model = first_order_model(spec)
    M_tilde, K_tilde = wick_symbol(spec)
    symbol_operator = _assemble_symbol(spec, M_tilde, K_tilde)
    return frobenius_relative(wick_rotate(model.D).matrix, symbol_operator)


def _symbol_square(spec: FirstOrderSpec, xi: np.ndarray) -> np.ndarray:
    S = np.zeros((spec.fiber_dim, spec.fiber_dim), dtype=np.complex128)
    for j, Mj in enumerate(spec.M):
        for k, Mk in enumerate(spec.M):
            S = S + (dagger(Mj) @ Mk + Mj @ dagger(Mk)) * xi[j] * xi[k]
    return S


def _mass_term(spec: FirstOrderSpec, xi: np.ndarray) -> np.ndarray:
    K = spec.K
    T = np.zeros_like(K)
    for j, Mj in enumerate(spec.M):
        T = T + (anticommutator(Mj, K) + anticommutator(dagger(Mj), dagger(K))) * xi[j]
    return T


def evaluate_condition(spec: FirstOrderSpec, name: str, witness: List[float]) -> float:
    """Measured quantity of one display at one witness.

    ``anticommutators`` takes the 1-based pair (j, k); every other display takes a direction xi.
    Invertibility reports the smallest singular value; the rest report a max-entry residual.
    """

    if name == "anticommutators":
        j, k = int(witness[0]) - 1, int(witness[1]) - 1
        Mj, Mk = spec.M[j], spec.M[k]
        return max_abs(anticommutator(Mj, Mk) - anticommutator(dagger(Mj), dagger(Mk)))
    xi = np.asarray(witness, dtype=float)
    S = _symbol_square(spec, xi)
    if name == "invertible_symbol":
        return float(svdvals(S)[-1])
    if name == "mass_commutes":
        return max_abs(commutator(S, _mass_term(spec, xi)))
    if name == "smooth_M":
        return max((max_abs(commutator(Mj, S)) for Mj in spec.M), default=0.0)
    if name == "smooth_K":
        return max_abs(commutator(spec.K, S))
    raise KeyError(name)


def is_violation(name: str, measured: float) -> bool:
    if name == "invertible_symbol":
        return not measured > INVERTIBILITY_TOL
    return not measured <= RESIDUAL_TOL


def _directions(spec: FirstOrderSpec, samples: int, seed: int) -> List[np.ndarray]:
    n = spec.spatial_dim
    rng = np.random.default_rng(seed)
    random = rng.normal(size=(samples, n))
    random /= np.linalg.norm(random, axis=1, keepdims=True)
    return [row for row in np.eye(n)] + [row for row in random]


def check_first_order_conditions(spec: FirstOrderSpec, xi_samples: int = 64, seed: int = DEFAULT_SEED) -> ConditionReport:
    directions = _directions(spec, xi_samples, seed)
    n = spec.spatial_dim
    results: Dict[str, ConditionResult] = {}

    pairs = [[float(j + 1), float(k + 1)] for j in range(n) for k in range(n)]
    for name in CONDITION_NAMES:
        witnesses = pairs if name == "anticommutators" else [[float(v) for v in xi] for xi in directions]
        measured = [evaluate_condition(spec, name, w) for w in witnesses]
        violating = next((w for w, value in zip(witnesses, measured) if is_violation(name, value)), None)
        worst = min(measured) if name == "invertible_symbol" else max(measured)
        if violating is not None:
            detail = f"violated at {violating}"
        else:
            detail = f"holds on {len(witnesses)} samples"
        results[name] = ConditionResult(passed=violating is None, measured=worst, witness=violating, detail=detail)

    admissible = all(results[name].passed for name in CONDITION_NAMES[:3])
    return ConditionReport(
        conditions=results,
        admissible=admissible,
        smoothly_summable=admissible and results["smooth_M"].passed and results["smooth_K"].passed,
        samples=xi_samples,
        seed=seed,
    )


__all__ = [
    "MAX_DIMENSION",
    "CONDITION_NAMES",
    "grid_nodes",
    "fourier_derivative",
    "bump",
    "first_order_model",
    "first_order_at_level",
    "points_for_level",
    "wick_symbol",
    "first_order_wick_check",
    "evaluate_condition",
    "is_violation",
    "check_first_order_conditions",
]
