import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from analysis.order import (
    OrderVerdict,
    compactness_evidence,
    compactness_from_profiles,
    evidence_from_norms,
    growth_ratios,
    growth_verdict,
    order_evidence,
    sn_generate,
    sn_margin,
    zero_floor,
)
from analysis.traces import (
    DimensionVerdict,
    convergence_rows,
    estimate_from_table,
    heat_trace,
    line_spectral_dimension,
    line_trace_constant,
    line_zeta_fourier,
    line_zeta_trace,
    mellin_cross_check,
    s_grid_from_range,
    spectral_dimension_estimate,
    zeta_trace,
    zeta_traces,
)
from analysis.weights import best_p1_upper_bound, p1_upper_bound, phi_weight, qn_norm
from core.errors import DomainError, FactorizationError, GrowthGuardError
from core.operators import BULK_MARGIN
from core.types import BasisSpec, TruncatedOperator
from models.finite import finite_geometry
from models.kernels import mehler_diagonal_integral
from models.lorentz import pauli_model
from models.oscillator import harmonic_oscillator


def abstract(matrix):
    matrix = np.asarray(matrix, dtype=np.complex128)
    return TruncatedOperator(matrix=matrix, basis=BasisSpec(kind="abstract", level=matrix.shape[0]))


@pytest.fixture(scope="module")
def oscillator():
    return harmonic_oscillator(64)


def test_heat_trace_matches_mehler_integral(oscillator):
    a = oscillator.algebra_samples[0].operator
    for t in (0.5, 1.0, 2.0):
        value = heat_trace(a, oscillator.derived.mean_square, t)
        assert abs(value - mehler_diagonal_integral(t)) / mehler_diagonal_integral(t) <= 1e-8


def test_zeta_traces_agree_with_pointwise_values(oscillator):
    a = oscillator.algebra_samples[0].operator
    H = oscillator.derived.mean_square
    grid = [0.5, 1.5, 2.5]
    assert_allclose(zeta_traces(a, H, grid), [zeta_trace(a, H, s) for s in grid], rtol=1e-12)
    with pytest.raises(DomainError):
        zeta_trace(a, H, 0.0)
    with pytest.raises(DomainError):
        heat_trace(a, H, -1.0)


def test_mellin_quadrature_reproduces_zeta(oscillator):
    check = mellin_cross_check(oscillator.algebra_samples[0].operator, oscillator.derived.mean_square, 2.0)
    assert check.converged
    assert check.discrepancy <= 1e-5


def test_line_trace_closed_form():
    assert line_trace_constant(2.0) == pytest.approx(0.5, rel=1e-14)
    g = lambda x: math.exp(-x * x)
    assert line_zeta_trace(g, 2.5) == pytest.approx(line_zeta_fourier(g, 2.5), rel=1e-9)
    with pytest.raises(DomainError):
        line_trace_constant(1.0)


def test_line_spectral_dimension_is_one():
    report = line_spectral_dimension(s_grid_from_range(0.05, 3.0, 0.05))
    assert report.estimate == pytest.approx(1.05)
    assert report.bracket == pytest.approx([1.0, 1.05])
    assert report.verdict == DimensionVerdict.estimated


def test_s_grid_from_range():
    grid = s_grid_from_range(0.05, 3.0, 0.05)
    assert len(grid) == 60
    assert grid[0] == 0.05 and grid[-1] == 3.0
    with pytest.raises(DomainError):
        s_grid_from_range(1.0, 0.5, 0.1)


def test_estimate_from_table_stabilized_suffix():
    table = np.array([[1.0, 1.0, 5.0, 5.0], [2.0, 2.0, 5.0, 5.0], [4.0, 4.0, 5.0, 5.0]])
    report = estimate_from_table([10, 20, 40], [0.5, 1.0, 1.5, 2.0], table)
    assert report.stabilized == [False, False, True, True]
    assert report.estimate == 1.5
    assert report.bracket == [1.0, 1.5]
    assert report.verdict == DimensionVerdict.estimated
    rows = convergence_rows("toy", "zeta", report)
    assert len(rows) == 12
    assert rows[0] == ("toy", "zeta", 0.5, 10, 1.0, False)


def test_estimate_from_table_verdicts():
    flat = np.ones((3, 2))
    assert estimate_from_table([10, 20, 40], [1.0, 2.0], flat).verdict == DimensionVerdict.zero
    growing = np.array([[1.0, 1.0], [2.0, 2.0], [4.0, 4.0]])
    report = estimate_from_table([10, 20, 40], [1.0, 2.0], growing)
    assert report.verdict == DimensionVerdict.inconclusive
    assert report.estimate is None
    with pytest.raises(DomainError):
        estimate_from_table([10, 20], [1.0], np.ones((2, 1)))


def test_finite_rank_dimension_is_zero():
    model = finite_geometry(np.array([[1.0, 0.0]]))
    pairs = [(model.algebra_samples[0].operator, model.derived.mean_square)]
    report = spectral_dimension_estimate(pairs, [0.5, 1.0, 1.5], threads=1)
    assert report.verdict == DimensionVerdict.zero
    assert report.estimate == 0.5


def test_growth_ratios_and_verdicts():
    assert growth_ratios([[0.0, 1.0], [0.0, 2.0]]) == [[1.0, 2.0]]
    assert growth_verdict([[1.0], [1.01]], 0.05) == OrderVerdict.supported
    assert growth_verdict([[1.5], [1.5]], 0.05) == OrderVerdict.refuted
    assert growth_verdict([[1.5], [1.0], [1.2]], 0.05) == OrderVerdict.inconclusive
    assert growth_verdict([], 0.05) == OrderVerdict.inconclusive


def test_compactness_profiles():
    decaying = [(1.0, 0.01, [1.0, 0.5]), (1.0, 0.005, [1.0, 0.5])]
    evidence = compactness_from_profiles("a", [8, 16], decaying)
    assert evidence.passed and evidence.stable
    flat = [(1.0, 0.9, [1.0, 0.9]), (1.0, 0.9, [1.0, 0.9])]
    assert not compactness_from_profiles("a", [8, 16], flat).passed
    zero = compactness_from_profiles("a", [8], [(0.0, 0.0, [0.0])])
    assert zero.passed and zero.note == "zero operator"


def test_order_evidence_on_finite_rank_model():
    model = pauli_model()
    a = model.algebra_samples[0].operator
    evidence = order_evidence([(a, model.derived.mean_square)], 0.0)
    assert evidence.verdict == OrderVerdict.supported
    assert evidence.note == "finite-rank"


def test_sn_generate_depths():
    model = pauli_model()
    assert len(sn_generate(model, 0)) == 3
    assert len(sn_generate(model, 1)) == 6
    with pytest.raises(GrowthGuardError):
        sn_generate(model, 4)


def test_round_off_delta_norms_do_not_count_as_growth():
    norms = [[1.2, 2.4e-12], [1.2, 3.5e-11], [1.2, 3.4e-10]]
    assert zero_floor(norms) == pytest.approx(1.2e-8)
    evidence = evidence_from_norms("T", [64, 128, 256], norms, 0.0, 1)
    assert evidence.ratios == [[1.0, 1.0], [1.0, 1.0]]
    assert evidence.verdict == OrderVerdict.supported
    assert growth_verdict(growth_ratios(norms), 0.05) == OrderVerdict.inconclusive


def test_zero_floor_never_drops_below_absolute_floor():
    assert zero_floor([[0.0, 0.0], [0.0, 0.0]]) == pytest.approx(1e-10)
    assert zero_floor([]) == pytest.approx(1e-10)


@pytest.fixture(scope="module")
def oscillator_ladder():
    return [harmonic_oscillator(level) for level in (128, 256, 512)]


def test_curvature_defect_of_oscillator_has_order_two(oscillator_ladder):
    pairs = [(model.derived.curvature_defect, model.derived.mean_square) for model in oscillator_ladder]
    assert order_evidence(pairs, 1.0).verdict == OrderVerdict.refuted
    assert order_evidence(pairs, 2.0).verdict == OrderVerdict.supported


def test_depth_two_commutator_chains_keep_their_order(oscillator_ladder):
    chains = [sn_generate(model, 2) for model in oscillator_ladder]
    assert sn_margin(2) > sn_margin(1) > sn_margin(0) > BULK_MARGIN
    narrow = []
    for index in range(len(chains[0])):
        pairs = [(chain[index], model.derived.mean_square) for chain, model in zip(chains, oscillator_ladder)]
        evidence = order_evidence(pairs, 2.0, k_max=0, margin=sn_margin(2))
        assert evidence.verdict == OrderVerdict.supported, (chains[0][index].label, evidence.norms)
        narrow.append(order_evidence(pairs, 2.0, k_max=0, margin=BULK_MARGIN).verdict)
    assert any(verdict != OrderVerdict.supported for verdict in narrow)


def test_oscillator_dimension_bracket_at_default_levels():
    pairs = []
    for level in (128, 256, 512, 1024):
        model = harmonic_oscillator(level)
        pairs.append((model.algebra_samples[0].operator, model.derived.mean_square))
    report = spectral_dimension_estimate(pairs, s_grid_from_range(0.1, 4.0, 0.05), threads=1)
    assert report.verdict == DimensionVerdict.estimated
    assert 0.9 <= report.bracket[0] <= report.bracket[1] <= 1.1


def test_phi_weight_and_q_norm():
    D = abstract(np.diag([0.0, 1.0]))
    assert phi_weight(abstract(np.eye(2)), D, 2.0).value == pytest.approx(1.5)
    with pytest.raises(DomainError):
        phi_weight(abstract(np.eye(2)), D, 0.0)
    with pytest.raises(DomainError):
        qn_norm(abstract(np.eye(2)), D, 0.5, 1)
    assert qn_norm(abstract(np.zeros((2, 2))), D, 1.0, 1) == 0.0


def test_factorization_upper_bounds():
    D = abstract(np.diag([0.0, 1.0]))
    T1 = abstract(np.diag([1.0, 2.0]))
    T2 = abstract(np.diag([3.0, 1.0]))
    bound = p1_upper_bound(T1, T2, D, 1.0, 1, target=abstract(np.diag([3.0, 2.0])))
    assert bound.kind == "upper bound"
    assert bound.value == pytest.approx(qn_norm(T1, D, 1.0, 1) * qn_norm(T2, D, 1.0, 1))
    with pytest.raises(FactorizationError):
        p1_upper_bound(T1, T2, D, 1.0, 1, target=abstract(np.eye(2)))
    with pytest.raises(FactorizationError):
        best_p1_upper_bound([], D, 1.0, 1)


def test_line_trace_of_lorentzian_weight_is_one():
    g = lambda x: 1.0 / (1.0 + x * x)
    assert line_zeta_trace(g, 3.0) == pytest.approx(1.0, abs=1e-8)
    assert line_zeta_fourier(g, 3.0) == pytest.approx(1.0, abs=1e-8)


def test_compactness_evidence_on_decaying_diagonals():
    def hermite(values):
        return TruncatedOperator(matrix=np.diag(values).astype(np.complex128), basis=BasisSpec(kind="hermite", level=len(values)))

    decaying = [hermite(1.0 / (1.0 + np.arange(n)) ** 2) for n in (16, 32)]
    evidence = compactness_evidence(decaying, label="decay")
    assert evidence.passed and evidence.stable
    assert evidence.leading_drift <= 1e-12
    assert not compactness_evidence([hermite(np.ones(16)), hermite(np.ones(32))]).passed
    with pytest.raises(DomainError):
        compactness_evidence([])
