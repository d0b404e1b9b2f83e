from .axioms import AxiomReport, CheckResult, Verdict, audit, verify_prst
from .lorentz import LorentzReport, verify_lorentz_type
from .measure import LevelMeasurement, measure_level, measure_levels
from .pipeline import PipelineReport, pipeline_from_measurements, wick_pipeline_check

__all__ = [
    "AxiomReport",
    "CheckResult",
    "Verdict",
    "audit",
    "verify_prst",
    "LorentzReport",
    "verify_lorentz_type",
    "LevelMeasurement",
    "measure_level",
    "measure_levels",
    "PipelineReport",
    "pipeline_from_measurements",
    "wick_pipeline_check",
]
