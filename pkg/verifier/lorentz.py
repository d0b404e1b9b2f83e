"""Lorentz-type audit: the beta identities and the conjugation of the two Wick rotations."""

from __future__ import annotations

from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict

from core.errors import MissingStructureError
from core.linalg import anticommutator, commutator, dagger, max_abs
from models.types import ModelTriple

LORENTZ_TOL = 1e-12


class LorentzReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    identities: Dict[str, float]
    violated: List[str]
    tolerance: float
    passed: bool


def _relative(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return max_abs(lhs - rhs) / max(max_abs(rhs), 1.0)


def verify_lorentz_type(model: ModelTriple, tol: float = LORENTZ_TOL) -> LorentzReport:
    if model.beta is None:
        raise MissingStructureError(f"{model.family.value} model carries no beta")
    b = model.beta.as_beta().matrix
    b_star = dagger(b)
    d = model.D.matrix
    d_star = dagger(d)
    identity = np.eye(model.level)
    square = d @ d

    identities: Dict[str, float] = {
        "beta* = -beta": max_abs(b_star + b),
        "beta^2 = -1": max_abs(b @ b + identity),
        "[beta, a] = 0": max((max_abs(commutator(b, s.operator.matrix)) for s in model.algebra_samples), default=0.0),
        "beta[D^2, beta] = D^2 - D*^2": _relative(b @ commutator(square, b), square - d_star @ d_star),
        "D* = sign beta D beta": _relative(d_star, model.krein_sign * (b @ d @ b)),
        "beta D_E beta* = -D~_E": _relative(
            b @ model.derived.wick_plus.matrix @ b_star, -model.derived.wick_minus.matrix
        ),
    }
    if model.grading is not None:
        identities["Gamma beta + beta Gamma = 0"] = max_abs(anticommutator(model.grading.matrix, b))

    violated = sorted(name for name, value in identities.items() if value > tol)
    return LorentzReport(identities=identities, violated=violated, tolerance=tol, passed=not violated)


__all__ = ["LORENTZ_TOL", "LorentzReport", "verify_lorentz_type"]
