from .graded import (
    DEFAULT_T_LIST,
    graded_index_exact,
    graded_traces,
    mckean_singer_index,
    numerical_rank,
    projection_index,
)
from .pairing import (
    DEFAULT_RESIDUE_GRID,
    INDEX_TOL,
    IndexMethod,
    IndexResult,
    ResidueRow,
    Unitary,
    UnitaryKind,
    check_unitarity,
    commutator_symbol,
    residue_at,
    residue_pairing,
    winding_oracle,
)

__all__ = [
    "DEFAULT_T_LIST",
    "graded_index_exact",
    "graded_traces",
    "mckean_singer_index",
    "numerical_rank",
    "projection_index",
    "DEFAULT_RESIDUE_GRID",
    "INDEX_TOL",
    "IndexMethod",
    "IndexResult",
    "ResidueRow",
    "Unitary",
    "UnitaryKind",
    "check_unitarity",
    "commutator_symbol",
    "residue_at",
    "residue_pairing",
    "winding_oracle",
]
