"""Run configuration: one validated object per invocation, built from a JSON file and/or flags."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from analysis.traces import s_grid_from_range
from core.errors import ConfigError, DomainError
from shared.config import WICKROT_FIXTURES, WICKROT_OUT, Tolerances, parse_tolerance_pairs
from shared.jsonio import read_json

DEFAULT_S_GRID = "0.1:4.0:0.05"
DEFAULT_T_LIST = [0.1, 0.5, 1.0, 2.0]


class Task(str, Enum):
    verify = "verify"
    zeta = "zeta"
    heat = "heat"
    index = "index"
    clifford = "clifford"
    all = "all"


MODEL_TASKS = (Task.verify, Task.zeta, Task.heat, Task.index)


def parse_s_grid(text: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--s-grid expects start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(part) for part in parts)
    except ValueError as exc:
        raise ConfigError(f"--s-grid values must be numeric, got {text!r}") from exc
    try:
        return s_grid_from_range(start, stop, step)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def parse_int_list(text: str, flag: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated integers, got {text!r}") from exc


def parse_float_list(text: str, flag: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated numbers, got {text!r}") from exc


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    task: Task
    model: Optional[str] = None
    levels: Optional[List[int]] = None
    s_grid: List[float] = Field(default_factory=lambda: parse_s_grid(DEFAULT_S_GRID))
    t_list: List[float] = Field(default_factory=lambda: list(DEFAULT_T_LIST))
    winding: Optional[int] = None
    tolerances: Dict[str, float] = Field(default_factory=dict)
    out: str = WICKROT_OUT
    threads: Optional[int] = Field(default=None, ge=1)
    signature: Optional[str] = None
    fixtures: str = WICKROT_FIXTURES

    @field_validator("levels")
    @classmethod
    def _increasing(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None:
            if not value or any(level < 1 for level in value):
                raise ValueError("levels must be positive integers")
            if any(b <= a for a, b in zip(value, value[1:])):
                raise ValueError("levels must be strictly increasing")
        return value

    @field_validator("s_grid", "t_list")
    @classmethod
    def _positive(cls, value: List[float]) -> List[float]:
        if not value or any(not item > 0 for item in value):
            raise ValueError("grid values must be positive and non-empty")
        return value

    @field_validator("tolerances")
    @classmethod
    def _known_tolerances(cls, value: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(value) - set(Tolerances.model_fields))
        if unknown:
            raise ValueError(f"unknown tolerance keys {unknown}")
        return value

    @model_validator(mode="after")
    def _model_needed(self) -> "RunConfig":
        if self.task in MODEL_TASKS and not self.model:
            raise ValueError(f"task {self.task.value} needs --model")
        return self

    def resolved_tolerances(self) -> Tolerances:
        return Tolerances().override(self.tolerances)


def build_config(payload: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(payload)
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(part) for part in error.get("loc", ())) or "config"
        raise ConfigError(f"invalid run configuration ({where}): {error['msg']}") from exc


def load_config_file(path: str) -> Dict[str, Any]:
    try:
        payload = read_json(Path(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return payload


def merge_flags(base: Dict[str, Any], flags: Dict[str, Any]) -> Dict[str, Any]:
    """Flags win over file values; --tol pairs are layered on top of file tolerances."""

    merged = dict(base)
    tolerance_pairs = flags.pop("tol", None) or []
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
    if tolerance_pairs:
        merged["tolerances"] = {**merged.get("tolerances", {}), **parse_tolerance_pairs(tolerance_pairs)}
    return merged


__all__ = [
    "DEFAULT_S_GRID",
    "DEFAULT_T_LIST",
    "Task",
    "MODEL_TASKS",
    "RunConfig",
    "parse_s_grid",
    "parse_int_list",
    "parse_float_list",
    "build_config",
    "load_config_file",
    "merge_flags",
]
