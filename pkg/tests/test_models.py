import math
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad
from scipy.special import roots_hermite

from clifford_rep.gamma import PAULI_Z
from core.errors import ConfigError, DomainError, ModelConstructionError
from models.descriptors import build_model, descriptor_payload, dump_descriptor, load_descriptor, natural_level, parse_descriptor
from models.finite import finite_geometry
from models.first_order import check_first_order_conditions, first_order_model, first_order_wick_check, fourier_derivative, grid_nodes
from models.hermite import annihilation, hermite_dvr, hermite_functions, multiplication_matrix, position
from models.kernels import de_heat_kernel, de_heat_mass, mehler_diagonal_integral, mehler_hermite_sum, mehler_kernel, mehler_semigroup_residual
from models.lorentz import pauli_model, vanishing_model
from models.oscillator import harmonic_oscillator, oscillator_identities, winding_symbol
from models.types import FirstOrderSpec, ModelFamily
from shared.jsonio import loads, read_json

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def test_ladder_and_position():
    a = annihilation(5)
    assert a[2, 3] == pytest.approx(math.sqrt(3.0))
    x = position(5)
    assert_allclose(x, x.conj().T)


def test_dvr_transform_is_orthogonal():
    _, vectors = hermite_dvr(24)
    assert_allclose(vectors @ vectors.T, np.eye(24), atol=1e-12)
    assert np.all(vectors[0] > 0)


def test_multiplication_by_x_matches_ladder_position():
    assert_allclose(multiplication_matrix(lambda x: x, 10), position(10), atol=1e-11)


def test_oscillator_mean_square_spectrum():
    model = harmonic_oscillator(12)
    expected = [2 * k + 1 for k in range(11)] + [11]
    assert_allclose(np.real(np.diag(model.derived.mean_square.matrix)), expected, atol=1e-12)
    assert model.family == ModelFamily.oscillator
    with pytest.raises(ModelConstructionError):
        harmonic_oscillator(4)


def test_oscillator_identities_hold_on_the_bulk():
    residuals = oscillator_identities(harmonic_oscillator(32))
    assert residuals
    assert max(residuals.values()) <= 1e-10


def test_winding_symbol():
    assert winding_symbol(2)(np.array([0.0]))[0] == -4.0
    assert winding_symbol(1)(np.array([1.0]))[0] == -1.0


def test_finite_geometry_layout():
    model = finite_geometry(np.array([[1.0, 0.0]]))
    assert model.level == 3
    assert_allclose(np.diag(model.grading.matrix), [1, 1, -1])
    assert model.D.matrix[2, 0] == 1.0
    assert model.is_even


def test_lorentz_models_satisfy_structure_relations():
    model = vanishing_model(np.array([[1.0, 0.5], [0.5, 2.0]]))
    assert model.level == 4
    assert max(model.structure_residuals().values()) <= 1e-12
    assert pauli_model(beta=1j * PAULI_Z).beta is not None


def test_fourier_derivative_is_skew_and_exact_on_resolved_modes():
    derivative = fourier_derivative(16, math.pi)
    assert not np.any(derivative + derivative.T)
    nodes = grid_nodes(16, math.pi)
    assert_allclose(derivative @ np.sin(nodes), np.cos(nodes), atol=1e-12)


def test_first_order_fixture_is_admissible():
    spec = load_descriptor(FIXTURES / "first_order.json").first_order_spec(points=16)
    report = check_first_order_conditions(spec)
    assert report.admissible
    assert report.smoothly_summable
    assert first_order_wick_check(spec) <= 1e-12


def test_degenerate_symbol_is_flagged():
    spec = load_descriptor(FIXTURES / "first_order_degenerate.json").first_order_spec(points=16)
    report = check_first_order_conditions(spec)
    assert not report.conditions["invertible_symbol"].passed
    assert not report.admissible


def test_rotated_symbol_matches_wick_rotation():
    spec = FirstOrderSpec(M=[[[0, 1], [1, 0]]], K=[[0.5, 0], [0, -0.5]], points=8)
    assert first_order_wick_check(spec) <= 1e-12
    model = first_order_model(spec)
    assert model.level == 16
    with pytest.raises(ValueError):
        FirstOrderSpec(M=[[[1, 0], [0, 1]]], K=[[0, 0], [0, 0]], points=6)


def test_mehler_kernel_matches_hermite_expansion():
    x = np.array([0.3, -1.1, 0.0])
    y = np.array([-0.2, 0.4, 0.0])
    assert_allclose(mehler_kernel(0.5, x, y), mehler_hermite_sum(0.5, x, y), rtol=1e-10)


def test_mehler_diagonal_integral_matches_quadrature():
    for t in (0.1, 1.0, 2.0):
        numeric, _ = quad(lambda x: math.exp(-x * x) * float(mehler_kernel(t, x, x)), -np.inf, np.inf, epsabs=1e-14, epsrel=1e-12)
        assert mehler_diagonal_integral(t) == pytest.approx(numeric, rel=1e-10)


def test_kernel_semigroup_and_mass():
    assert mehler_semigroup_residual(0.5, 0.5, 0.2, -0.3) <= 1e-9
    assert de_heat_mass(0.7, 0.4) == pytest.approx(1.0, rel=1e-12)


def test_fixture_descriptors_load_and_build():
    for path in sorted(FIXTURES.glob("*.json")):
        descriptor = load_descriptor(path)
        assert loads(dump_descriptor(descriptor)) == read_json(path)
        if descriptor.family in (ModelFamily.oscillator, ModelFamily.line):
            model = build_model(descriptor, 16)
        elif descriptor.family == ModelFamily.first_order:
            model = build_model(descriptor, 32)
        else:
            model = build_model(descriptor)
            assert model.level == natural_level(descriptor)
        assert model.family == descriptor.family


def test_descriptor_validation():
    with pytest.raises(ConfigError):
        parse_descriptor({"family": "finite"})
    with pytest.raises(ConfigError):
        parse_descriptor({"family": "pauli", "colour": "red"})
    with pytest.raises(ConfigError):
        load_descriptor(FIXTURES / "missing.json")
    assert "expect_failure" not in descriptor_payload(parse_descriptor({"family": "pauli"}))
    flagged = parse_descriptor({"family": "pauli", "expect_failure": ["axiom 4"]})
    assert descriptor_payload(flagged)["expect_failure"] == ["axiom 4"]
    with pytest.raises(ConfigError):
        parse_descriptor({"family": "pauli", "expect_failure": True})


def test_first_order_level_must_match_grid():
    descriptor = load_descriptor(FIXTURES / "first_order.json")
    with pytest.raises(ModelConstructionError):
        build_model(descriptor, 30)


def test_mehler_kernel_on_grid():
    X, Y = np.meshgrid(np.linspace(-3.0, 3.0, 61), np.linspace(-3.0, 3.0, 61))
    for t in (0.5, 1.0, 2.0):
        assert np.max(np.abs(mehler_kernel(t, X, Y) - mehler_hermite_sum(t, X, Y, terms=200))) <= 1e-8


def test_wick_heat_kernel_diagonal_and_symmetry():
    x = np.array([-2.0, 0.0, 1.5])
    assert_allclose(de_heat_kernel(0.3, x, x), np.full(3, 1.0 / (2.0 * math.sqrt(math.pi * 0.3))), rtol=1e-14)
    assert de_heat_kernel(0.3, 0.4, -1.2) == pytest.approx(np.conj(de_heat_kernel(0.3, -1.2, 0.4)), rel=1e-14)
    with pytest.raises(DomainError):
        de_heat_kernel(0.0, 0.0, 0.0)


def test_hermite_functions_are_orthonormal():
    nodes, weights = roots_hermite(40)
    h = hermite_functions(12, nodes) * np.exp(nodes**2 / 2.0)
    assert_allclose((h * weights) @ h.T, np.eye(12), atol=1e-12)
