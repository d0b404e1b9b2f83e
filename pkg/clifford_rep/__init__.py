from .gamma import (
    DEFAULT_SEED,
    CliffordRep,
    ResidualReport,
    Signature,
    SpinSymmetry,
    all_signatures,
    build_rep,
    clifford_suite,
    fundamental_symmetry,
    generate_gamma_E,
    rotate_representation,
    verify_mixed_relation,
)

__all__ = [
    "DEFAULT_SEED",
    "CliffordRep",
    "ResidualReport",
    "Signature",
    "SpinSymmetry",
    "all_signatures",
    "build_rep",
    "clifford_suite",
    "fundamental_symmetry",
    "generate_gamma_E",
    "rotate_representation",
    "verify_mixed_relation",
]
