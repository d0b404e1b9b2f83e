from __future__ import annotations


class WickrotError(Exception):
    """Base class for every error raised by the toolkit."""


class HermiticityError(WickrotError):
    pass


class DimensionMismatchError(WickrotError):
    pass


class DomainError(WickrotError):
    """A scalar function or parameter is used outside the set where it is defined."""


class FactorizationError(WickrotError):
    pass


class SignatureError(WickrotError):
    pass


class ModelConstructionError(WickrotError):
    pass


class GrowthGuardError(WickrotError):
    pass


class MissingStructureError(WickrotError):
    """A grading or fundamental symmetry was required but the model has none."""


class GridTooCoarseError(WickrotError):
    pass


class ConfigError(WickrotError):
    pass


__all__ = [
    "WickrotError",
    "HermiticityError",
    "DimensionMismatchError",
    "DomainError",
    "FactorizationError",
    "SignatureError",
    "ModelConstructionError",
    "GrowthGuardError",
    "MissingStructureError",
    "GridTooCoarseError",
    "ConfigError",
]
