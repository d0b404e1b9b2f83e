import math

import numpy as np
import pytest

from core.errors import DomainError, GridTooCoarseError, MissingStructureError
from index.graded import graded_index_exact, graded_traces, mckean_singer_index, numerical_rank, projection_index
from index.pairing import (
    IndexMethod,
    Unitary,
    UnitaryKind,
    check_unitarity,
    commutator_symbol,
    residue_at,
    residue_pairing,
    winding_oracle,
)
from models.finite import finite_geometry
from models.lorentz import pauli_model, vanishing_model
from models.oscillator import harmonic_oscillator, line_model


@pytest.mark.parametrize("m", [-2, -1, 0, 1, 2])
def test_residue_pairing_recovers_winding_number(m):
    result = residue_pairing(Unitary.winding(m))
    assert abs(result.residue + m) <= 1e-10
    assert result.pairing == m
    assert result.oracle == m
    assert result.passed
    assert result.method == IndexMethod.analytic_kernel
    assert len(result.s_table) == 5


def test_negative_three_winding():
    result = residue_pairing(Unitary.winding(-3))
    assert result.pairing == -3
    assert result.passed


def test_residue_formula():
    assert residue_at(1.0, 2.0) == pytest.approx(0.5, rel=1e-14)
    assert residue_at(0.5, -2.0 * math.pi) == pytest.approx(-1.0, rel=1e-14)


def test_commutator_symbol_without_model():
    g = commutator_symbol(Unitary.winding(1))
    assert g(np.array([0.0]))[0] == -2.0
    user = Unitary(kind=UnitaryKind.user, function=lambda x: (x - 1j) / (x + 1j))
    with pytest.raises(DomainError):
        commutator_symbol(user)


def test_oracle_on_user_unitary():
    user = Unitary(kind="user", function=lambda x: (x - 1j) / (x + 1j))
    assert winding_oracle(user) == 1
    with pytest.raises(DomainError):
        residue_pairing(user)


def test_oracle_rejects_non_unitary_and_coarse_grids():
    stretched = Unitary(kind="user", function=lambda x: 2.0 * np.exp(1j * np.arctan(x)))
    with pytest.raises(DomainError):
        check_unitarity(stretched, np.linspace(-1.0, 1.0, 5))
    with pytest.raises(GridTooCoarseError):
        winding_oracle(Unitary.winding(2000), points=4096)


def test_residue_grid_must_approach_one_half():
    with pytest.raises(DomainError):
        residue_pairing(Unitary.winding(1), s_grid=[0.4])
    with pytest.raises(DomainError):
        residue_pairing(Unitary.winding(1), s_grid=[0.8, 0.9])


def test_unitary_validation():
    with pytest.raises(ValueError):
        Unitary(kind="winding")
    with pytest.raises(ValueError):
        Unitary(kind="user")


def test_truncated_route_is_experimental():
    models = [line_model(16), line_model(32)]
    result = residue_pairing(Unitary.winding(1), IndexMethod.truncated_operator, models=models)
    assert result.experimental
    assert len(result.s_table) == 2 * 5
    assert result.oracle == 1
    symbol = commutator_symbol(Unitary.winding(1), models[0])
    assert symbol.dim == 16
    with pytest.raises(DomainError):
        residue_pairing(Unitary.winding(1), IndexMethod.truncated_operator)


def test_graded_index_of_small_blocks():
    assert graded_index_exact(np.array([[1.0]])) == 0
    assert graded_index_exact(np.array([[1.0, 0.0]])) == 1
    assert graded_index_exact(np.zeros((2, 3))) == 1
    assert numerical_rank(np.zeros((3, 3))) == 0


@pytest.mark.parametrize("shape,rank", [((1, 1), 1), ((1, 2), 1), ((2, 1), 0), ((3, 5), 2), ((8, 8), 8), ((6, 8), 3), ((8, 5), 5)])
def test_mckean_singer_matches_kernel_count(shape, rank):
    rng = np.random.default_rng(sum(shape) * 10 + rank)
    d2, d1 = shape
    B = rng.normal(size=(d2, rank)) @ rng.normal(size=(rank, d1)) if rank else np.zeros(shape)
    model = finite_geometry(B)
    result = mckean_singer_index(model)
    assert result.pairing == graded_index_exact(B) == d1 - d2
    assert result.oracle == projection_index(model) == d1 - d2
    assert result.passed
    assert len(result.t_table) == 4


def test_lorentz_type_graded_trace_vanishes():
    for model in (vanishing_model(np.array([[1.0, 0.5], [0.5, 2.0]])), pauli_model()):
        traces = graded_traces(model, [0.1, 1.0])
        assert max(abs(value) for value in traces) <= 1e-12
        assert mckean_singer_index(model).pairing == 0


def test_graded_trace_needs_grading():
    with pytest.raises(MissingStructureError):
        graded_traces(harmonic_oscillator(8), [1.0])
    with pytest.raises(MissingStructureError):
        projection_index(harmonic_oscillator(8))


def test_mckean_singer_logs():
    logs = []
    mckean_singer_index(finite_geometry(np.array([[1.0, 0.0]])), logs=logs)
    assert logs and logs[0].startswith("Index: graded trace")


def test_mckean_singer_on_random_blocks():
    rng = np.random.default_rng(99)
    for _ in range(100):
        d2, d1 = (int(v) for v in rng.integers(1, 9, size=2))
        rank = int(rng.integers(0, min(d1, d2) + 1))
        B = rng.normal(size=(d2, rank)) @ rng.normal(size=(rank, d1)) if rank else np.zeros((d2, d1))
        model = finite_geometry(B)
        result = mckean_singer_index(model, t_list=[0.1, 0.5, 1.0, 2.0])
        assert result.pairing == graded_index_exact(B)
        assert max(abs(row[1] - result.pairing) for row in result.t_table) <= 1e-10
