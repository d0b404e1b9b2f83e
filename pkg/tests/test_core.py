import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.errors import DimensionMismatchError, DomainError, HermiticityError
from core.linalg import dagger, hermitian_residual, hermitize, op_norm
from core.operators import (
    bulk_size,
    compress,
    curvature_defect,
    delta_map,
    derive,
    func_calculus,
    krein_adjoint,
    krein_from_beta,
    low_mode_basis,
    lr_maps,
    mean_square,
    resolvent_power,
    sigma_conjugate,
    sqrt_abs,
    universal_bounds,
    wick_residuals,
    wick_rotate,
)
from core.types import BasisKind, BasisSpec, FundamentalSymmetry, Orientation, Side, SymmetryConvention, TruncatedOperator


def abstract(matrix):
    matrix = np.asarray(matrix, dtype=np.complex128)
    return TruncatedOperator(matrix=matrix, basis=BasisSpec(kind=BasisKind.abstract, level=matrix.shape[0]), label="T")


def random_operator(rng, n=12):
    return abstract(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))


def test_wick_rotation_is_hermitian_for_non_normal_operator(rng):
    D = random_operator(rng)
    assert hermitian_residual(wick_rotate(D).matrix) <= 1e-14
    assert hermitian_residual(wick_rotate(D, Orientation.minus).matrix) <= 1e-14


def test_wick_squares_split_into_mean_square_and_defect(rng):
    residuals = wick_residuals(derive(random_operator(rng)))
    assert residuals["plus_square"] <= 1e-12
    assert residuals["minus_square"] <= 1e-12
    assert residuals["difference"] <= 1e-12


def test_curvature_defect_vanishes_exactly_for_self_adjoint(rng):
    x = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    D = abstract(x + dagger(x))
    assert not np.any(curvature_defect(D).matrix)
    assert_allclose(wick_rotate(D).matrix, D.matrix, atol=1e-14)


def test_mean_square_of_ladder_operator():
    n = 6
    a = np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1)
    msq = mean_square(abstract(math.sqrt(2.0) * a)).matrix
    assert_allclose(np.real(np.diag(msq)), [1, 3, 5, 7, 9, 5], atol=1e-12)
    assert_allclose(msq - np.diag(np.diag(msq)), 0.0, atol=1e-14)


def test_universal_bounds_hold(rng):
    for n in (4, 10, 20):
        first, second = universal_bounds(random_operator(rng, n))
        assert first <= math.sqrt(2.0) + 1e-10
        assert second <= 2.0 + 1e-10


def test_functional_calculus_on_diagonal_operators():
    assert_allclose(sqrt_abs(abstract(np.diag([4.0, 9.0]))).matrix, np.diag([2.0, 3.0]))
    assert_allclose(resolvent_power(abstract(np.diag([0.0, 3.0])), -0.5).matrix, np.diag([1.0, 0.5]))


def test_functional_calculus_rejects_undefined_values():
    with pytest.raises(DomainError):
        func_calculus(abstract(np.diag([0.0, 1.0])), lambda w: 1.0 / w)


def test_delta_map_in_eigenbasis():
    D = abstract(np.diag([0.0, 1.0]))
    T = abstract([[0.0, 1.0], [1.0, 0.0]])
    root = math.sqrt(2.0)
    assert_allclose(delta_map(T, D).matrix, [[0.0, 1.0 - root], [root - 1.0, 0.0]], atol=1e-15)
    assert_allclose(delta_map(T, D, order=0).matrix, T.matrix)
    with pytest.raises(DomainError):
        delta_map(T, D, order=-1)


def test_fundamental_symmetry_conventions():
    sigma_x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    beta = FundamentalSymmetry(matrix=1j * sigma_x, convention=SymmetryConvention.beta)
    krein = beta.as_krein()
    assert beta.validate_symmetry()
    assert krein.validate_symmetry()
    assert_allclose(krein.matrix, -sigma_x)
    assert_allclose(krein.as_beta().matrix, beta.matrix)


def test_krein_adjoint_uses_converted_symmetry(rng):
    T = random_operator(rng, 2)
    beta = FundamentalSymmetry(matrix=1j * np.array([[0, 1], [1, 0]]), convention="anti-self-adjoint")
    J = -np.array([[0, 1], [1, 0]])
    assert_allclose(krein_adjoint(T, beta).matrix, J @ dagger(T.matrix) @ J)
    with pytest.raises(DimensionMismatchError):
        krein_adjoint(random_operator(rng, 3), beta)


def test_truncated_operator_validation():
    with pytest.raises(ValueError):
        TruncatedOperator(matrix=np.zeros((2, 3)), basis=BasisSpec(kind="abstract", level=2))
    with pytest.raises(ValueError):
        TruncatedOperator(matrix=np.zeros((2, 2)), basis=BasisSpec(kind="abstract", level=3))
    with pytest.raises(ValueError):
        BasisSpec(kind="fourier-grid", level=10, half_period=1.0, points_per_axis=4, spatial_dim=1)


def test_eigensystem_refuses_non_hermitian():
    with pytest.raises(HermiticityError):
        hermitize(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(HermiticityError):
        abstract([[0.0, 1.0], [0.0, 0.0]]).eigensystem()


def test_op_norm_large_path_matches_svd(rng):
    matrix = rng.normal(size=(300, 260))
    assert math.isclose(op_norm(matrix), float(np.linalg.norm(matrix, ord=2)), rel_tol=1e-10)
    assert op_norm(np.zeros((0, 0))) == 0.0


def test_low_mode_basis_is_orthonormal():
    basis = low_mode_basis(8, 1, 2)
    assert basis.shape == (16, 6)
    assert_allclose(dagger(basis) @ basis, np.eye(6), atol=1e-12)


def test_compression_by_basis_kind(rng):
    matrix = rng.normal(size=(12, 12))
    assert compress(matrix, BasisSpec(kind="hermite", level=12)).shape == (8, 8)
    assert compress(matrix, BasisSpec(kind="hermite", level=12), margin=3).shape == (9, 9)
    assert compress(matrix, BasisSpec(kind="hermite", level=12), margin=10).shape == (6, 6)
    assert compress(matrix, BasisSpec(kind="abstract", level=12)) is matrix
    grid = BasisSpec(kind="fourier-grid", level=8, half_period=math.pi, points_per_axis=8, spatial_dim=1)
    assert compress(rng.normal(size=(8, 8)), grid).shape == (3, 3)
    hermite = TruncatedOperator(matrix=np.eye(12), basis=BasisSpec(kind="hermite", level=12))
    assert bulk_size(hermite) == 8
    assert bulk_size(abstract(np.eye(5))) == 5


def test_wick_algebra_on_random_batch(rng):
    for _ in range(100):
        n = int(rng.integers(1, 17))
        derived = derive(random_operator(rng, n))
        assert hermitian_residual(derived.wick_plus.matrix) <= 1e-13
        assert hermitian_residual(derived.wick_minus.matrix) <= 1e-13
        assert max(wick_residuals(derived).values()) <= 1e-12
        square = derived.wick_plus.matrix @ derived.wick_plus.matrix
        assert np.linalg.eigvalsh(hermitize(square)).min() >= -1e-10


def test_left_and_right_commutator_maps():
    D = abstract(np.diag([0.0, 1.0]))
    T = abstract([[0.0, 1.0], [0.0, 0.0]])
    assert_allclose(lr_maps(T, D).matrix, [[0.0, -1.0], [0.0, 0.0]], atol=1e-14)
    assert_allclose(lr_maps(T, D, Side.right).matrix, [[0.0, -1.0 / math.sqrt(2.0)], [0.0, 0.0]], atol=1e-14)
    assert not np.any(np.abs(lr_maps(abstract(np.eye(2)), D).matrix) > 1e-14)


def test_sigma_group_law(rng):
    H = rng.normal(size=(6, 6))
    D = abstract(H + H.T)
    T = random_operator(rng, 6)
    assert_allclose(sigma_conjugate(T, D, 0.0).matrix, T.matrix, atol=1e-12)
    composed = sigma_conjugate(sigma_conjugate(T, D, 0.3 + 0.2j), D, -0.7)
    assert_allclose(composed.matrix, sigma_conjugate(T, D, -0.4 + 0.2j).matrix, atol=1e-12)
    diagonal = abstract(np.diag([0.0, 2.0]))
    scaled = sigma_conjugate(abstract([[0.0, 1.0], [0.0, 0.0]]), diagonal, 1.0)
    assert scaled.matrix[0, 1] == pytest.approx(math.sqrt(1.0 / 5.0), rel=1e-12)


def test_krein_form_of_beta():
    beta = FundamentalSymmetry(matrix=np.diag([1j, -1j]), convention=SymmetryConvention.beta)
    assert beta.validate_symmetry()
    J = krein_from_beta(beta)
    assert J.convention == SymmetryConvention.krein
    assert_allclose(J.matrix, np.diag([-1.0, 1.0]), atol=1e-15)
    assert J.validate_symmetry()
