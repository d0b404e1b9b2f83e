from __future__ import annotations

import numpy as np

from core.errors import ModelConstructionError
from core.types import BasisKind, BasisSpec

from .assembly import assemble
from .types import ModelFamily, ModelTriple


def finite_geometry(B: np.ndarray) -> ModelTriple:
    """D = [[0, 0], [B, 0]] on C^{d1} + C^{d2} with B of shape (d2, d1); Gamma = diag(1, -1)."""

    B = np.atleast_2d(np.asarray(B, dtype=np.complex128))
    if B.ndim != 2:
        raise ModelConstructionError(f"B must be a matrix, got shape {B.shape}")
    d2, d1 = B.shape
    n = d1 + d2
    D = np.zeros((n, n), dtype=np.complex128)
    D[d1:, :d1] = B
    grading = np.diag(np.concatenate([np.ones(d1), -np.ones(d2)])).astype(np.complex128)
    first = np.diag(np.concatenate([np.ones(d1), np.zeros(d2)])).astype(np.complex128)
    second = np.eye(n, dtype=np.complex128) - first
    return assemble(
        D,
        BasisSpec(kind=BasisKind.abstract, level=n),
        ModelFamily.finite,
        [("P1", first), ("P2", second)],
        grading=grading,
        metadata={"d1": d1, "d2": d2},
    )


__all__ = ["finite_geometry"]
