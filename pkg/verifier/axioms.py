"""Audit of the pseudo-Riemannian spectral triple axioms and the boundedness lemmas.

Condition 1 (essential self-adjointness, density of smooth domains) has no
finite-dimensional content and is always reported as evidence-only.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from analysis.order import (
    OrderEvidence,
    OrderVerdict,
    compactness_from_profiles,
    evidence_from_norms,
    growth_ratios,
    growth_verdict,
    zero_floor,
)
from shared.config import Tolerances

from .measure import ANALYTIC_LINE_FAMILIES, ORDER_CHECKS, RATIO_EXPONENTS, LevelMeasurement, ModelBuilder, measure_levels

UNIVERSAL_LIMITS = (math.sqrt(2.0), 2.0)
UNIVERSAL_SLACK = 1e-10


class Verdict(str, Enum):
    passed = "pass"
    failed = "fail"
    evidence_only = "evidence-only"
    reported = "reported"


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    measured: Dict[str, Any] = Field(default_factory=dict)
    detail: str = ""


class AxiomReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    levels: List[int]
    level_errors: Dict[str, str]
    axioms: Dict[str, CheckResult]
    lemmas: Dict[str, CheckResult]
    structure: Dict[str, float]
    passed: bool
    failures: List[str]


def _usable(measurements: Sequence[LevelMeasurement]) -> List[LevelMeasurement]:
    return [m for m in measurements if m.ok]


def _order(measurements: Sequence[LevelMeasurement], name: str, tol: Tolerances) -> OrderEvidence:
    r, k_max = ORDER_CHECKS[name]
    return evidence_from_norms(
        name,
        [m.level for m in measurements],
        [m.order[name] for m in measurements],
        r,
        k_max,
        tol.growth,
        measurements[-1].finite_rank,
    )


def _from_order(*evidence: OrderEvidence) -> Verdict:
    return Verdict.passed if all(e.verdict == OrderVerdict.supported for e in evidence) else Verdict.failed


def _compactness(measurements: Sequence[LevelMeasurement], prefix: str, tol: Tolerances) -> CheckResult:
    per_sample: Dict[str, Any] = {}
    failed: List[str] = []
    for label in measurements[-1].samples:
        key = f"{prefix}:{label}"
        evidence = compactness_from_profiles(
            label,
            [m.level for m in measurements],
            [m.profiles[key] for m in measurements],
            tol.decay,
            tol.sv_stab,
            measurements[-1].finite_rank,
        )
        per_sample[label] = evidence.model_dump(mode="json")
        if not evidence.passed:
            failed.append(f"{label}: sigma_q/sigma_1={evidence.sigma_quarter[-1] / evidence.sigma_1[-1]:.3g}, drift={evidence.leading_drift}")
    return CheckResult(
        verdict=Verdict.failed if failed else Verdict.passed,
        measured=per_sample,
        detail="; ".join(failed) if failed else "singular values decay and stabilize",
    )


def bounded_columns(
    measurements: Sequence[LevelMeasurement],
    columns: Dict[str, List[float]],
    tol: Tolerances,
) -> OrderVerdict:
    if measurements[-1].finite_rank:
        return OrderVerdict.supported
    if len(measurements) < 3:
        return OrderVerdict.inconclusive
    table = [[columns[name][i] for name in sorted(columns)] for i in range(len(measurements))]
    return growth_verdict(growth_ratios(table, zero_floor(table)), tol.growth)


def _axiom_three(measurements: Sequence[LevelMeasurement], tol: Tolerances) -> CheckResult:
    columns: Dict[str, List[float]] = {}
    for label in measurements[-1].samples:
        for side in ("D", "D*"):
            columns[f"[{side},{label}]"] = [m.commutators[label][side] for m in measurements]
    verdict = bounded_columns(measurements, columns, tol)
    return CheckResult(
        verdict=Verdict.passed if verdict == OrderVerdict.supported else Verdict.failed,
        measured={"norms": columns, "growth": verdict.value},
        detail="commutators bounded across truncations" if verdict == OrderVerdict.supported else f"commutator growth {verdict.value}",
    )


def _universal(measurements: Sequence[LevelMeasurement]) -> CheckResult:
    first = [m.universal[0] for m in measurements]
    second = [m.universal[1] for m in measurements]
    ok = all(v <= UNIVERSAL_LIMITS[0] + UNIVERSAL_SLACK for v in first) and all(
        v <= UNIVERSAL_LIMITS[1] + UNIVERSAL_SLACK for v in second
    )
    return CheckResult(
        verdict=Verdict.passed if ok else Verdict.failed,
        measured={"D(1+<D>^2)^-1/2": first, "W R_D W": second},
        detail=f"max {max(first):.6g} <= sqrt(2), max {max(second):.6g} <= 2" if ok else "universal bound exceeded",
    )


def _ratio_columns(measurements: Sequence[LevelMeasurement], keys: Sequence[str]) -> Dict[str, List[float]]:
    return {key: [m.ratios[key] for m in measurements] for key in keys}


def _lemmas(measurements: Sequence[LevelMeasurement], tol: Tolerances) -> Dict[str, CheckResult]:
    hypothesis_only = measurements[-1].family in ANALYTIC_LINE_FAMILIES
    lemmas: Dict[str, CheckResult] = {"bound2": _universal(measurements)}

    use_a = [m.universal[1] for m in measurements]
    lemmas["use_A"] = CheckResult(
        verdict=Verdict.reported,
        measured={"norms": use_a, "below_one": all(v < 1.0 for v in use_a)},
        detail="sufficient condition for (1+<D>^2)(1+D_E^2)^-1 bounded",
    )

    smo = _order(measurements, "1+D_E^2", tol)
    smo_inverse = _order(measurements, "(1+D_E^2)^-1", tol)
    lemmas["smo_one"] = CheckResult(
        verdict=_from_order(smo),
        measured={"1+D_E^2": smo.model_dump(mode="json"), "(1+D_E^2)^-1": smo_inverse.model_dump(mode="json")},
        detail=f"1+D_E^2 in OP^2: {smo.verdict.value}; (1+D_E^2)^-1 in OP^-2: {smo_inverse.verdict.value}",
    )

    keys = [k for k in measurements[-1].ratios if k != "convert_smooth"]
    columns = _ratio_columns(measurements, keys)
    ratio_verdict = bounded_columns(measurements, columns, tol)
    bounded = ratio_verdict == OrderVerdict.supported
    lemmas["ratio"] = CheckResult(
        verdict=Verdict.reported if hypothesis_only else (Verdict.passed if bounded else Verdict.failed),
        measured={"norms": columns, "exponents": list(RATIO_EXPONENTS), "growth": ratio_verdict.value},
        detail=f"ratio norms {ratio_verdict.value}",
    )

    ratio_op0 = _order(measurements, "(1+<D>^2)(1+D_E^2)^-1", tol)
    lemmas["ratios_op0"] = CheckResult(
        verdict=Verdict.reported if hypothesis_only else _from_order(ratio_op0),
        measured=ratio_op0.model_dump(mode="json"),
        detail=f"(1+<D>^2)(1+D_E^2)^-1 in OP^0: {ratio_op0.verdict.value}",
    )

    convert = [m.ratios["convert_smooth"] for m in measurements]
    convert_verdict = bounded_columns(measurements, {"convert_smooth": convert}, tol)
    lemmas["convert_smooth"] = CheckResult(
        verdict=Verdict.reported,
        measured={"norms": convert, "growth": convert_verdict.value},
        detail=f"(1+<D>^2)(1+D_E^2)^-1 {'bounded' if convert_verdict == OrderVerdict.supported else convert_verdict.value} across truncations",
    )

    inverse = _order(measurements, "(1+a)^-1", tol)
    lemmas["inverse_op0"] = CheckResult(
        verdict=_from_order(inverse),
        measured=inverse.model_dump(mode="json"),
        detail=f"(1+a)^-1 in OP^0: {inverse.verdict.value}",
    )

    sn: Dict[str, Any] = {}
    sn_failed: List[str] = []
    for name in measurements[-1].sn_order:
        depth = float(name.split("[")[0][2:])
        evidence = evidence_from_norms(
            name,
            [m.level for m in measurements],
            [m.sn_order[name] for m in measurements],
            depth,
            0,
            tol.growth,
            measurements[-1].finite_rank,
        )
        sn[name] = {"verdict": evidence.verdict.value, "norms": [row[0] for row in evidence.norms]}
        if evidence.verdict != OrderVerdict.supported:
            sn_failed.append(name)
    lemmas["smooth_summability"] = CheckResult(
        verdict=Verdict.failed if sn_failed else Verdict.passed,
        measured=sn,
        detail=f"not supported: {sn_failed}" if sn_failed else "every S^n element is order n",
    )
    return lemmas


def audit(measurements: Sequence[LevelMeasurement], tol: Optional[Tolerances] = None, logs: Optional[List[str]] = None) -> AxiomReport:
    tol = tol or Tolerances()
    logs = logs if logs is not None else []
    errors = {str(m.level): m.error or "" for m in measurements if not m.ok}
    usable = _usable(measurements)
    levels = [m.level for m in measurements]
    if not usable:
        logs.append("Verifier: no level could be constructed")
        return AxiomReport(
            levels=levels,
            level_errors=errors,
            axioms={},
            lemmas={},
            structure={},
            passed=False,
            failures=["construction: no usable truncation level"],
        )

    r_d = _order(usable, "R_D", tol)
    r_one = _order(usable, "[<D>^2,R_D]", tol)
    axioms: Dict[str, CheckResult] = {
        "1": CheckResult(verdict=Verdict.evidence_only, detail="not decidable at finite truncation"),
        "2a": CheckResult(
            verdict=_from_order(r_d, r_one),
            measured={"R_D": r_d.model_dump(mode="json"), "[<D>^2,R_D]": r_one.model_dump(mode="json")},
            detail=f"R_D in OP^2: {r_d.verdict.value}; [<D>^2,R_D] in OP^2: {r_one.verdict.value}",
        ),
        "2b": _compactness(usable, "2b", tol),
        "3": _axiom_three(usable, tol),
        "4": _compactness(usable, "4", tol),
    }
    lemmas = _lemmas(usable, tol)
    structure = {
        "wick_hermitian": max(m.wick_hermitian for m in usable),
        "min_mean_square": min(m.min_mean_square for m in usable),
        **{f"wick_{name}": max(m.wick[name] for m in usable) for name in usable[-1].wick},
    }

    failures = [f"axiom {name}: {check.detail}" for name, check in axioms.items() if check.verdict == Verdict.failed]
    failures += [f"lemma {name}: {check.detail}" for name, check in lemmas.items() if check.verdict == Verdict.failed]
    failures += [f"construction at N={level}: {message}" for level, message in errors.items()]
    if structure["wick_hermitian"] > tol.hermitian:
        failures.append(f"D_E Hermiticity residual {structure['wick_hermitian']:.3e}")
    for name in ("wick_plus_square", "wick_minus_square"):
        if structure.get(name, 0.0) > tol.algebraic:
            failures.append(f"{name} residual {structure[name]:.3e}")
    if structure["min_mean_square"] < -tol.hermitian:
        failures.append(f"<D>^2 not positive: min eigenvalue {structure['min_mean_square']:.3e}")

    for name, check in axioms.items():
        logs.append(f"Verifier: axiom {name} {check.verdict.value}")
    for name, check in lemmas.items():
        logs.append(f"Verifier: lemma {name} {check.verdict.value}")
    return AxiomReport(
        levels=levels,
        level_errors=errors,
        axioms=axioms,
        lemmas=lemmas,
        structure=structure,
        passed=not failures,
        failures=failures,
    )


def verify_prst(
    builder: ModelBuilder,
    levels: Sequence[int],
    tolerances: Optional[Tolerances] = None,
    threads: Optional[int] = None,
    logs: Optional[List[str]] = None,
    measurements: Optional[Sequence[LevelMeasurement]] = None,
) -> AxiomReport:
    """Measure every level of ``builder`` and audit the axioms and lemmas."""

    if measurements is None:
        measurements = measure_levels(builder, levels, threads=threads, logs=logs)
    return audit(measurements, tolerances, logs)


__all__ = [
    "Verdict",
    "CheckResult",
    "AxiomReport",
    "audit",
    "verify_prst",
]
