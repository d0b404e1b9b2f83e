"""JSON model descriptors.

A descriptor names a family and carries its matrices as nested ``[re, im]``
pairs, exactly as read, so dumping a loaded descriptor reproduces it bit for bit.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.errors import ConfigError, ModelConstructionError
from shared.jsonio import complex_matrix_from_json, dumps, read_json, write_json

from .finite import finite_geometry
from .first_order import first_order_at_level
from .lorentz import pauli_model, vanishing_model
from .oscillator import harmonic_oscillator, line_model
from .types import FirstOrderSpec, ModelFamily, ModelTriple

ComplexEntry = Union[List[float], float]
ComplexMatrix = List[List[ComplexEntry]]

OSCILLATOR_LEVELS = [128, 256, 512, 1024]
GRID_POINTS = {1: [64, 128, 256], 2: [8, 16, 32], 3: [4, 8, 16]}


class ModelDescriptor(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    family: ModelFamily
    name: Optional[str] = None
    B: Optional[ComplexMatrix] = None
    M: Optional[List[ComplexMatrix]] = None
    K: Optional[ComplexMatrix] = None
    A: Optional[ComplexMatrix] = None
    N: Optional[int] = Field(default=None, ge=1)
    L: Optional[float] = Field(default=None, gt=0)
    grid: Optional[int] = Field(default=None, ge=2)
    winding: Optional[int] = None
    levels: Optional[List[int]] = None
    expect_failure: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _required_fields(self) -> "ModelDescriptor":
        required = {
            ModelFamily.finite: ["B"],
            ModelFamily.first_order: ["M", "K"],
            ModelFamily.lorentz: ["A"],
        }.get(self.family, [])
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.family.value} descriptor missing {missing}")
        return self

    @property
    def label(self) -> str:
        return self.name or self.family.value

    def first_order_spec(self, points: Optional[int] = None) -> FirstOrderSpec:
        return FirstOrderSpec(
            M=[complex_matrix_from_json(m) for m in self.M or []],
            K=complex_matrix_from_json(self.K or []),
            half_period=self.L if self.L is not None else float(np.pi),
            points=points or self.grid or GRID_POINTS.get(len(self.M or []), [8])[0],
        )

    def default_levels(self) -> List[int]:
        if self.levels:
            return list(self.levels)
        if self.family in (ModelFamily.oscillator, ModelFamily.line):
            return [self.N] if self.N else list(OSCILLATOR_LEVELS)
        if self.family == ModelFamily.first_order:
            spec = self.first_order_spec()
            grids = [self.grid] if self.grid else GRID_POINTS.get(spec.spatial_dim, [4, 8])
            return [p**spec.spatial_dim * spec.fiber_dim for p in grids]
        return [natural_level(self)]


def natural_level(descriptor: ModelDescriptor) -> int:
    if descriptor.family == ModelFamily.finite:
        rows = descriptor.B or []
        return len(rows) + (len(rows[0]) if rows else 0)
    if descriptor.family == ModelFamily.lorentz:
        return 2 * len(descriptor.A or [])
    if descriptor.family == ModelFamily.pauli:
        return 2
    return descriptor.default_levels()[-1]


def build_model(descriptor: ModelDescriptor, level: Optional[int] = None) -> ModelTriple:
    """Construct the family's ModelTriple at ``level`` (ignored for fixed-size families)."""

    family = descriptor.family
    winding = descriptor.winding if descriptor.winding is not None else 1
    if family == ModelFamily.finite:
        return finite_geometry(complex_matrix_from_json(descriptor.B or []))
    if family == ModelFamily.lorentz:
        return vanishing_model(complex_matrix_from_json(descriptor.A or []))
    if family == ModelFamily.pauli:
        return pauli_model()
    level = level or descriptor.default_levels()[-1]
    if family == ModelFamily.oscillator:
        return harmonic_oscillator(level, winding=winding)
    if family == ModelFamily.line:
        return line_model(level, winding=winding)
    if family == ModelFamily.first_order:
        try:
            spec = descriptor.first_order_spec()
        except ValueError as exc:
            raise ModelConstructionError(f"invalid first-order descriptor: {exc}") from exc
        return first_order_at_level(spec, level)
    raise ModelConstructionError(f"unknown family {family}")


def parse_descriptor(payload: dict) -> ModelDescriptor:
    try:
        return ModelDescriptor.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(f"invalid model descriptor: {exc.errors()[0]['msg']}") from exc


def load_descriptor(path: Union[str, Path]) -> ModelDescriptor:
    try:
        payload = read_json(path)
    except OSError as exc:
        raise ConfigError(f"cannot read model descriptor {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"model descriptor {path} is not valid JSON: {exc}") from exc
    return parse_descriptor(payload)


def descriptor_payload(descriptor: ModelDescriptor) -> dict:
    return descriptor.model_dump(mode="json", exclude_defaults=True)


def dump_descriptor(descriptor: ModelDescriptor, path: Optional[Union[str, Path]] = None) -> bytes:
    payload = descriptor_payload(descriptor)
    if path is not None:
        write_json(path, payload)
    return dumps(payload)


__all__ = [
    "OSCILLATOR_LEVELS",
    "GRID_POINTS",
    "ModelDescriptor",
    "natural_level",
    "build_model",
    "parse_descriptor",
    "load_descriptor",
    "descriptor_payload",
    "dump_descriptor",
]
