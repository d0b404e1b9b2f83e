"""Harmonic oscillator D = d/dx + x = sqrt(2) a in the Hermite basis.

Both the oscillator family and the line family (whose Wick rotation is
D_E = i d/dx + x) are built here; they share every matrix.
"""

from __future__ import annotations

from typing import Callable, Dict

import numpy as np

from core.errors import ModelConstructionError
from core.linalg import commutator, max_abs
from core.operators import bulk_size
from core.types import BasisKind, BasisSpec

from .assembly import assemble
from .hermite import QUADRATURE_FACTOR, annihilation, derivative, multiplication_matrix, position
from .types import ModelFamily, ModelTriple

MIN_LEVEL = 8
GAUSSIAN_LABEL = "exp(-x^2)"


def gaussian(x: np.ndarray) -> np.ndarray:
    return np.exp(-(x**2))


def gaussian_d1(x: np.ndarray) -> np.ndarray:
    return -2.0 * x * np.exp(-(x**2))


def gaussian_d2(x: np.ndarray) -> np.ndarray:
    return (4.0 * x**2 - 2.0) * np.exp(-(x**2))


def winding_symbol(m: int) -> Callable[[np.ndarray], np.ndarray]:
    """g_m(x) = -2m / (1 + x^2)."""

    def _g(x: np.ndarray) -> np.ndarray:
        return -2.0 * m / (1.0 + x**2)

    return _g


def winding_label(m: int) -> str:
    return f"g_{m}"


def harmonic_oscillator(N: int, winding: int = 1, family: ModelFamily = ModelFamily.oscillator) -> ModelTriple:
    if N < MIN_LEVEL:
        raise ModelConstructionError(f"oscillator level must be >= {MIN_LEVEL}, got {N}")
    D = np.sqrt(2.0) * annihilation(N)
    samples = [
        (GAUSSIAN_LABEL, multiplication_matrix(gaussian, N)),
        (winding_label(winding), multiplication_matrix(winding_symbol(winding), N)),
    ]
    return assemble(
        D,
        BasisSpec(kind=BasisKind.hermite, level=N),
        family,
        samples,
        metadata={"quadrature_nodes": QUADRATURE_FACTOR * N, "winding": winding},
    )


def line_model(N: int, winding: int = 1) -> ModelTriple:
    return harmonic_oscillator(N, winding=winding, family=ModelFamily.line)


def _relative(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return max_abs(lhs - rhs) / max(max_abs(rhs), 1.0)


def oscillator_identities(model: ModelTriple) -> Dict[str, float]:
    """Relative residuals of the oscillator commutator ladder on the bulk block."""

    n = model.level
    size = bulk_size(model.D)
    box = np.s_[:size, :size]
    msq = model.derived.mean_square.matrix
    rd = model.derived.curvature_defect.matrix
    de = model.derived.wick_plus.matrix
    x = position(n)
    dx = derivative(n)
    residuals: Dict[str, float] = {
        "[<D>^2, d/dx] = -2x": _relative(commutator(msq, dx)[box], (-2.0 * x)[box]),
        "[<D>^2, x] = -2 d/dx": _relative(commutator(msq, x)[box], (-2.0 * dx)[box]),
    }
    for p, q in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]:
        term = np.linalg.matrix_power(x, p) @ np.linalg.matrix_power(dx, q)
        residuals[f"[R_D, x^{p} d^{q}] = 2i({p}-{q}) x^{p} d^{q}"] = _relative(
            commutator(rd, term)[box], (2j * (p - q) * term)[box]
        )
    r1 = commutator(msq, rd)
    residuals["R1 = 4i<D>^2 - 8i x^2"] = _relative(r1[box], (4j * msq - 8j * x @ x)[box])
    residuals["R2 = 16 R_D"] = _relative(commutator(msq, r1)[box], (16.0 * rd)[box])

    a = multiplication_matrix(gaussian, n)
    a1 = multiplication_matrix(gaussian_d1, n)
    a2 = multiplication_matrix(gaussian_d2, n)
    residuals["[<D>^2, a] = -a'' - 2a' d/dx"] = _relative(commutator(msq, a)[box], (-a2 - 2.0 * a1 @ dx)[box])
    residuals["[D_E^2, f] = -f'' + 2i f' D_E"] = _relative(commutator(de @ de, a)[box], (-a2 + 2j * a1 @ de)[box])
    return residuals


__all__ = [
    "MIN_LEVEL",
    "GAUSSIAN_LABEL",
    "gaussian",
    "winding_symbol",
    "winding_label",
    "harmonic_oscillator",
    "line_model",
    "oscillator_identities",
]
