from .errors import (
    ConfigError,
    DimensionMismatchError,
    DomainError,
    FactorizationError,
    GridTooCoarseError,
    GrowthGuardError,
    HermiticityError,
    MissingStructureError,
    ModelConstructionError,
    SignatureError,
    WickrotError,
)
from .operators import (
    adjoint,
    bulk,
    bulk_size,
    compress,
    compressed_norm,
    commutator_op,
    curvature_defect,
    delta_map,
    derive,
    func_calculus,
    krein_adjoint,
    krein_from_beta,
    lr_maps,
    mean_square,
    resolvent_power,
    sigma_conjugate,
    sqrt_abs,
    universal_bounds,
    wick_residuals,
    wick_rotate,
)
from .types import (
    BasisKind,
    BasisSpec,
    DerivedOperators,
    FundamentalSymmetry,
    Orientation,
    Side,
    SymmetryConvention,
    TruncatedOperator,
)

__all__ = [
    "ConfigError",
    "DimensionMismatchError",
    "DomainError",
    "FactorizationError",
    "GridTooCoarseError",
    "GrowthGuardError",
    "HermiticityError",
    "MissingStructureError",
    "ModelConstructionError",
    "SignatureError",
    "WickrotError",
    "adjoint",
    "bulk",
    "bulk_size",
    "compress",
    "compressed_norm",
    "commutator_op",
    "curvature_defect",
    "delta_map",
    "derive",
    "func_calculus",
    "krein_adjoint",
    "krein_from_beta",
    "lr_maps",
    "mean_square",
    "resolvent_power",
    "sigma_conjugate",
    "sqrt_abs",
    "universal_bounds",
    "wick_residuals",
    "wick_rotate",
    "BasisKind",
    "BasisSpec",
    "DerivedOperators",
    "FundamentalSymmetry",
    "Orientation",
    "Side",
    "SymmetryConvention",
    "TruncatedOperator",
]
