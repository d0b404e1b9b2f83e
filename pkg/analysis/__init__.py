from .order import (
    CompactnessEvidence,
    OrderEvidence,
    OrderVerdict,
    compactness_evidence,
    order_evidence,
    order_norms,
    sn_generate,
)
from .traces import (
    DimensionVerdict,
    MellinCheck,
    StabilizationMethod,
    ZetaReport,
    convergence_rows,
    heat_trace,
    line_spectral_dimension,
    line_zeta_fourier,
    line_zeta_trace,
    mellin_cross_check,
    s_grid_from_range,
    spectral_dimension_estimate,
    zeta_trace,
)
from .weights import UpperBound, WeightValue, best_p1_upper_bound, p1_upper_bound, phi_weight, qn_norm

__all__ = [
    "CompactnessEvidence",
    "OrderEvidence",
    "OrderVerdict",
    "compactness_evidence",
    "order_evidence",
    "order_norms",
    "sn_generate",
    "DimensionVerdict",
    "MellinCheck",
    "StabilizationMethod",
    "ZetaReport",
    "convergence_rows",
    "heat_trace",
    "line_spectral_dimension",
    "line_zeta_fourier",
    "line_zeta_trace",
    "mellin_cross_check",
    "s_grid_from_range",
    "spectral_dimension_estimate",
    "zeta_trace",
    "UpperBound",
    "WeightValue",
    "best_p1_upper_bound",
    "p1_upper_bound",
    "phi_weight",
    "qn_norm",
]
