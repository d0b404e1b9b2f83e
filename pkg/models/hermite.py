"""Hermite-function basis: ladder matrices, stable wavefunctions and a DVR for multiplication operators.

Convention: a|n> = sqrt(n)|n-1>, so a[n-1, n] = sqrt(n); x = (a + a*)/sqrt(2),
d/dx = (a - a*)/sqrt(2).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

QUADRATURE_FACTOR = 4


def annihilation(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(np.complex128)


def position(n: int) -> np.ndarray:
    a = annihilation(n)
    return (a + a.T) / np.sqrt(2.0)


def derivative(n: int) -> np.ndarray:
    a = annihilation(n)
    return (a - a.T) / np.sqrt(2.0)


def hermite_functions(n: int, x: np.ndarray) -> np.ndarray:
    """Rows h_0..h_{n-1} of the normalized Hermite functions evaluated at ``x``."""

    x = np.asarray(x, dtype=float)
    out = np.zeros((n, x.size))
    if n == 0:
        return out
    out[0] = np.pi ** (-0.25) * np.exp(-0.5 * x.ravel() ** 2)
    if n > 1:
        out[1] = np.sqrt(2.0) * x.ravel() * out[0]
    for k in range(1, n - 1):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x.ravel() * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


@lru_cache(maxsize=8)
def hermite_dvr(q: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and unitary transform of the q-point Hermite DVR.

    Column k of the transform holds the coefficients of the k-th DVR function;
    columns are phased so the first row is positive.
    """

    off = np.sqrt(np.arange(1, q, dtype=float) / 2.0)
    nodes, vectors = eigh_tridiagonal(np.zeros(q), off)
    vectors = vectors * np.sign(vectors[0, :])[None, :]
    nodes.setflags(write=False)
    vectors.setflags(write=False)
    return nodes, vectors


def multiplication_matrix(g: Callable[[np.ndarray], np.ndarray], n: int, q: int | None = None) -> np.ndarray:
    """<h_i| g |h_j> for i, j < n by Gauss-Hermite quadrature on q = 4n nodes."""

    q = q or QUADRATURE_FACTOR * n
    nodes, vectors = hermite_dvr(q)
    block = vectors[:n, :]
    values = np.asarray(g(nodes), dtype=np.complex128)
    matrix = (block * values[None, :]) @ block.T
    return 0.5 * (matrix + matrix.T)


__all__ = [
    "QUADRATURE_FACTOR",
    "annihilation",
    "position",
    "derivative",
    "hermite_functions",
    "hermite_dvr",
    "multiplication_matrix",
]
