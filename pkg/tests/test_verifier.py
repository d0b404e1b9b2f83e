from pathlib import Path

import numpy as np
import pytest

from clifford_rep.gamma import PAULI_Z
from core.errors import MissingStructureError
from core.operators import universal_bounds
from models.descriptors import build_model, load_descriptor
from models.finite import finite_geometry
from models.lorentz import pauli_model, vanishing_model
from models.oscillator import harmonic_oscillator
from shared.config import Tolerances
from verifier.axioms import Verdict, audit, verify_prst
from verifier.lorentz import verify_lorentz_type
from verifier.measure import measure_level, measure_levels
from verifier.pipeline import pipeline_from_measurements, wick_pipeline_check

S_GRID = [0.5, 1.0, 1.5]
FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def test_pauli_model_passes_the_lorentz_audit():
    report = verify_lorentz_type(pauli_model())
    assert report.passed
    assert report.violated == []


def test_sigma_three_beta_breaks_only_the_grading_identity():
    report = verify_lorentz_type(pauli_model(beta=1j * PAULI_Z))
    assert report.violated == ["Gamma beta + beta Gamma = 0"]
    assert not report.passed


def test_vanishing_model_passes_the_lorentz_audit():
    assert verify_lorentz_type(vanishing_model(np.array([[1.0, 0.5], [0.5, 2.0]]))).passed


def test_lorentz_audit_needs_beta():
    with pytest.raises(MissingStructureError):
        verify_lorentz_type(finite_geometry(np.array([[1.0]])))


def test_measurement_records_wick_structure():
    measurement = measure_level(finite_geometry(np.array([[1.0, 0.0]])), S_GRID)
    assert measurement.ok and measurement.finite_rank
    assert measurement.wick_hermitian <= 1e-14
    assert max(measurement.wick.values()) <= 1e-12
    assert len(measurement.zeta_mean_square) == len(S_GRID)
    assert measurement.universal[0] <= np.sqrt(2.0) + 1e-10


@pytest.mark.parametrize("builder", [lambda level: pauli_model(), lambda level: finite_geometry(np.array([[1.0, 0.0]]))])
def test_finite_models_pass_the_audit(builder):
    model = builder(0)
    measurements = measure_levels(builder, [model.level], S_GRID, threads=1)
    report = audit(measurements, Tolerances())
    assert report.passed, report.failures
    assert report.axioms["1"].verdict == Verdict.evidence_only
    assert report.lemmas["use_A"].verdict == Verdict.reported
    pipeline = pipeline_from_measurements(measurements, S_GRID)
    assert pipeline.passed, pipeline.failures
    assert pipeline.dimensions_agree


def test_construction_failures_are_recorded_per_level():
    logs = []
    measurements = measure_levels(harmonic_oscillator, [4], threads=1, logs=logs)
    assert not measurements[0].ok
    assert measurements[0].error.startswith("ModelConstructionError")
    assert "failed" in logs[0]
    report = verify_prst(harmonic_oscillator, [4], measurements=measurements)
    assert not report.passed
    assert report.failures == ["construction: no usable truncation level"]
    pipeline = wick_pipeline_check(harmonic_oscillator, [4], S_GRID, measurements=measurements)
    assert not pipeline.passed


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.json")), ids=lambda path: path.stem)
def test_universal_bounds_hold_for_every_fixture_and_level(path):
    descriptor = load_descriptor(path)
    for level in descriptor.default_levels():
        model = build_model(descriptor, level)
        first, second = universal_bounds(model.D, model.derived)
        assert first <= np.sqrt(2.0) + 1e-10, (level, first)
        assert second <= 2.0 + 1e-10, (level, second)


def test_oscillator_audit_on_three_levels():
    report = verify_prst(harmonic_oscillator, [128, 256, 512], threads=1)
    assert report.passed, report.failures
    assert report.lemmas["smooth_summability"].verdict == Verdict.passed
    assert report.axioms["2a"].verdict == Verdict.passed
