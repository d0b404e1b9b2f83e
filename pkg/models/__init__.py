from .descriptors import ModelDescriptor, build_model, dump_descriptor, load_descriptor, parse_descriptor
from .finite import finite_geometry
from .first_order import check_first_order_conditions, first_order_model, first_order_wick_check
from .hermite import hermite_dvr, hermite_functions, multiplication_matrix
from .kernels import de_heat_kernel, mehler_diagonal_integral, mehler_hermite_sum, mehler_kernel
from .lorentz import pauli_model, vanishing_model
from .oscillator import harmonic_oscillator, line_model, oscillator_identities
from .types import AlgebraSample, ConditionReport, ConditionResult, FirstOrderSpec, ModelFamily, ModelTriple

__all__ = [
    "ModelDescriptor",
    "build_model",
    "dump_descriptor",
    "load_descriptor",
    "parse_descriptor",
    "finite_geometry",
    "check_first_order_conditions",
    "first_order_model",
    "first_order_wick_check",
    "hermite_dvr",
    "hermite_functions",
    "multiplication_matrix",
    "de_heat_kernel",
    "mehler_diagonal_integral",
    "mehler_hermite_sum",
    "mehler_kernel",
    "pauli_model",
    "vanishing_model",
    "harmonic_oscillator",
    "line_model",
    "oscillator_identities",
    "AlgebraSample",
    "ConditionReport",
    "ConditionResult",
    "FirstOrderSpec",
    "ModelFamily",
    "ModelTriple",
]
