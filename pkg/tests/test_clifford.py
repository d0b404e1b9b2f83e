import numpy as np
import pytest
from numpy.testing import assert_allclose

from clifford_rep import Signature, all_signatures, build_rep, clifford_suite, fundamental_symmetry, generate_gamma_E, rotate_representation
from core.errors import SignatureError


@pytest.mark.parametrize("signature", all_signatures(6), ids=lambda sig: f"{sig.t},{sig.s}")
def test_suite_passes_for_every_small_signature(signature):
    report = clifford_suite(signature, samples=200)
    assert report.passed, report.violations
    assert max(report.residuals.values()) <= 1e-12


def test_all_signatures_enumerates_each_split():
    signatures = all_signatures(3)
    assert len(signatures) == 2 + 3 + 4
    assert Signature(t=0, s=3) in signatures and Signature(t=3, s=0) in signatures


def test_minkowski_representation():
    rep = build_rep(Signature.parse("1,3"))
    assert rep.signature.rep_dim == 4
    time = rep.gamma[0]
    assert_allclose(time @ time, np.eye(4), atol=1e-15)
    for space in rep.gamma[1:]:
        assert_allclose(space @ space, -np.eye(4), atol=1e-15)
    assert "spin_reflection" in clifford_suite(rep.signature).residuals


def test_euclidean_generators_are_anti_self_adjoint():
    for g in generate_gamma_E(5):
        assert_allclose(g.conj().T, -g, atol=1e-15)
        assert_allclose(g @ g, -np.eye(4), atol=1e-15)


def test_signature_errors():
    with pytest.raises(SignatureError):
        Signature.parse("x")
    with pytest.raises(SignatureError):
        Signature.parse("0,0")
    with pytest.raises(SignatureError):
        generate_gamma_E(0)
    with pytest.raises(SignatureError):
        rotate_representation(generate_gamma_E(2), Signature(t=1, s=2))
    with pytest.raises(SignatureError):
        fundamental_symmetry(build_rep(Signature(t=0, s=2)))
