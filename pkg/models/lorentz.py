"""Even Lorentz-type models: D = sigma_2 (x) A with Gamma = sigma_3 (x) 1 and beta = i sigma_1 (x) 1."""

from __future__ import annotations

from typing import Optional

import numpy as np

from clifford_rep.gamma import PAULI_X, PAULI_Y, PAULI_Z
from core.linalg import hermitize
from core.types import BasisKind, BasisSpec

from .assembly import assemble
from .types import ModelFamily, ModelTriple


def vanishing_model(A: np.ndarray) -> ModelTriple:
    A = hermitize(np.atleast_2d(np.asarray(A, dtype=np.complex128)))
    k = A.shape[0]
    identity = np.eye(k, dtype=np.complex128)
    first_mode = np.zeros((k, k), dtype=np.complex128)
    first_mode[0, 0] = 1.0
    n = 2 * k
    return assemble(
        np.kron(PAULI_Y, A),
        BasisSpec(kind=BasisKind.abstract, level=n),
        ModelFamily.lorentz,
        [("1", np.eye(n, dtype=np.complex128)), ("1 (x) e00", np.kron(np.eye(2), first_mode))],
        grading=np.kron(PAULI_Z, identity),
        beta=1j * np.kron(PAULI_X, identity),
        krein_sign=1,
        metadata={"fiber": k},
    )


def pauli_model(beta: Optional[np.ndarray] = None) -> ModelTriple:
    """D = sigma_2, Gamma = sigma_3; beta defaults to i sigma_1."""

    return assemble(
        PAULI_Y.copy(),
        BasisSpec(kind=BasisKind.abstract, level=2),
        ModelFamily.pauli,
        [("1", np.eye(2, dtype=np.complex128))],
        grading=PAULI_Z.copy(),
        beta=1j * PAULI_X if beta is None else np.asarray(beta, dtype=np.complex128),
        krein_sign=1,
    )


__all__ = ["vanishing_model", "pauli_model"]
