"""Closed-form heat kernels of the oscillator and of the line model, with quadrature oracles."""

from __future__ import annotations

import numpy as np
from scipy.special import roots_hermite

from core.errors import DomainError

from .hermite import hermite_functions

MEHLER_TERMS = 200


def _require_positive(t: float) -> float:
    t = float(t)
    if not t > 0:
        raise DomainError(f"heat time must be positive, got {t}")
    return t


def mehler_kernel(t: float, x, y):
    """Kernel of exp(-t(-d^2/dx^2 + x^2))."""

    t = _require_positive(t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    two_t = 2.0 * t
    prefactor = 1.0 / np.sqrt(2.0 * np.pi * np.sinh(two_t))
    exponent = -0.5 * (np.cosh(two_t) / np.sinh(two_t)) * (x**2 + y**2) + x * y / np.sinh(two_t)
    return prefactor * np.exp(exponent)


def mehler_hermite_sum(t: float, x, y, terms: int = MEHLER_TERMS):
    """sum_{n < terms} exp(-t(2n+1)) h_n(x) h_n(y), broadcasting x against y."""

    t = _require_positive(t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xb, yb = np.broadcast_arrays(x, y)
    hx = hermite_functions(terms, xb.ravel())
    hy = hermite_functions(terms, yb.ravel())
    decay = np.exp(-t * (2.0 * np.arange(terms) + 1.0))
    return np.einsum("n,nk,nk->k", decay, hx, hy).reshape(xb.shape)


def mehler_diagonal_integral(t: float) -> float:
    """Integral of exp(-x^2) k_t(x, x) over the line."""

    t = _require_positive(t)
    return float(np.sqrt(np.pi / (1.0 + np.tanh(t))) / np.sqrt(2.0 * np.pi * np.sinh(2.0 * t)))


def mehler_semigroup_residual(t: float, s: float, x: float, y: float, nodes: int = 200) -> float:
    """|int k_t(x,z) k_s(z,y) dz - k_{t+s}(x,y)| by Gauss-Hermite quadrature."""

    z, w = roots_hermite(nodes)
    integrand = mehler_kernel(t, x, z) * mehler_kernel(s, z, y) * np.exp(z**2)
    return float(abs(np.sum(w * integrand) - mehler_kernel(t + s, x, y)))


def de_heat_kernel(t: float, x, y):
    """Kernel of exp(-t D_E^2) for D_E = i d/dx + x."""

    t = _require_positive(t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    phase = 1j * (x**2 - y**2) / 2.0
    return np.exp(-((x - y) ** 2) / (4.0 * t) + phase) / (2.0 * np.sqrt(np.pi * t))


def de_heat_mass(t: float, x: float, nodes: int = 64) -> float:
    """int |k_t(x, y)| dy via Gauss-Hermite after the substitution y = x + 2 sqrt(t) u."""

    t = _require_positive(t)
    u, w = roots_hermite(nodes)
    scale = 2.0 * np.sqrt(t)
    integrand = np.abs(de_heat_kernel(t, x, x + scale * u)) * np.exp(u**2) * scale
    return float(np.sum(w * integrand))


__all__ = [
    "MEHLER_TERMS",
    "mehler_kernel",
    "mehler_hermite_sum",
    "mehler_diagonal_integral",
    "mehler_semigroup_residual",
    "de_heat_kernel",
    "de_heat_mass",
]
