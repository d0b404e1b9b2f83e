"""Environment-driven settings and numeric tolerances.

``WICKROT_THREADS`` sets the sweep worker count (defaults to the CPU count),
``WICKROT_DEBUG_LOGS=1`` embeds the trace log in every report,
``WICKROT_FIXTURES`` and ``WICKROT_OUT`` point at the descriptor and output
directories. A ``.env`` file in the working directory is honoured.
"""

from __future__ import annotations

import os
from typing import Dict, Iterable

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from core.errors import ConfigError

load_dotenv()

WICKROT_FIXTURES = os.getenv("WICKROT_FIXTURES", "fixtures")
WICKROT_OUT = os.getenv("WICKROT_OUT", "out")
REPORT_SCHEMA = "wickrot-report/1"
REPORT_VERSION = "1.0.0"


def default_threads() -> int:
    raw = os.getenv("WICKROT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise ConfigError(f"WICKROT_THREADS must be an integer, got {raw!r}") from exc
    return os.cpu_count() or 1


def debug_logs_enabled() -> bool:
    return os.getenv("WICKROT_DEBUG_LOGS") == "1"


class Tolerances(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    algebraic: float = Field(default=1e-12, gt=0)
    hermitian: float = Field(default=1e-10, gt=0)
    growth: float = Field(default=0.05, gt=0)
    decay: float = Field(default=0.1, gt=0)
    sv_stab: float = Field(default=0.05, gt=0)
    stab: float = Field(default=1e-3, gt=0)
    index: float = Field(default=1e-10, gt=0)
    clifford: float = Field(default=1e-12, gt=0)
    mellin: float = Field(default=1e-5, gt=0)
    bulk_identity: float = Field(default=1e-10, gt=0)

    def override(self, updates: Dict[str, float]) -> "Tolerances":
        try:
            return Tolerances.model_validate({**self.model_dump(), **updates})
        except ValidationError as exc:
            raise ConfigError(f"invalid tolerance override: {exc.errors()[0]['msg']} ({sorted(updates)})") from exc


def parse_tolerance_pairs(pairs: Iterable[str]) -> Dict[str, float]:
    parsed: Dict[str, float] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects KEY=VAL, got {pair!r}")
        key = key.strip()
        if key not in Tolerances.model_fields:
            raise ConfigError(f"unknown tolerance key {key!r}")
        try:
            parsed[key] = float(value)
        except ValueError as exc:
            raise ConfigError(f"tolerance {key} must be numeric, got {value!r}") from exc
    return parsed


__all__ = [
    "WICKROT_FIXTURES",
    "WICKROT_OUT",
    "REPORT_SCHEMA",
    "REPORT_VERSION",
    "Tolerances",
    "default_threads",
    "debug_logs_enabled",
    "parse_tolerance_pairs",
]
