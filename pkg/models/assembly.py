from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.errors import ModelConstructionError
from core.operators import derive
from core.types import BasisSpec, FundamentalSymmetry, SymmetryConvention, TruncatedOperator

from .types import AlgebraSample, ModelFamily, ModelTriple

STRUCTURE_TOL = 1e-12


def assemble(
    D: np.ndarray,
    basis: BasisSpec,
    family: ModelFamily,
    samples: List[Tuple[str, np.ndarray]],
    grading: Optional[np.ndarray] = None,
    beta: Optional[np.ndarray] = None,
    krein_sign: int = 1,
    metadata: Optional[Dict[str, Any]] = None,
) -> ModelTriple:
    """Wrap raw matrices into a ModelTriple and check the grading/beta relations."""

    try:
        dirac = TruncatedOperator(matrix=D, basis=basis, label="D")
        algebra = [AlgebraSample(label=label, operator=dirac.with_matrix(m, label)) for label, m in samples]
        model = ModelTriple(
            D=dirac,
            algebra_samples=algebra,
            grading=dirac.with_matrix(grading, "Gamma") if grading is not None else None,
            beta=FundamentalSymmetry(matrix=beta, convention=SymmetryConvention.beta) if beta is not None else None,
            krein_sign=krein_sign,
            derived=derive(dirac),
            basis=basis,
            family=family,
            metadata=metadata or {},
        )
    except ValueError as exc:
        raise ModelConstructionError(f"{family.value} model at level {basis.level}: {exc}") from exc
    bad = {name: value for name, value in model.structure_residuals().items() if value > STRUCTURE_TOL}
    if bad:
        raise ModelConstructionError(f"{family.value} model violates structure relations: {bad}")
    return model


__all__ = ["STRUCTURE_TOL", "assemble"]
