"""JSON and CSV output with atomic replacement.

Complex scalars travel as ``[re, im]`` pairs in both directions.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

import numpy as np
import orjson
from pydantic import BaseModel

PathLike = Union[str, Path]

_JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE


def _default(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump()
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return complex_matrix_to_json(value) if value.ndim == 2 else [[float(z.real), float(z.imag)] for z in value.ravel()]
        return value.tolist()
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(payload: Any) -> bytes:
    return orjson.dumps(payload, default=_default, option=_JSON_OPTIONS)


def loads(raw: Union[bytes, str]) -> Any:
    return orjson.loads(raw)


def complex_matrix_to_json(matrix: np.ndarray) -> List[List[List[float]]]:
    matrix = np.asarray(matrix, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


def complex_matrix_from_json(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    """Accepts [[re, im], ...] entries; bare real numbers are read as real entries."""

    parsed = []
    for row in rows:
        parsed_row = []
        for entry in row:
            if isinstance(entry, (list, tuple)):
                if len(entry) != 2:
                    raise ValueError(f"complex entry must be [re, im], got {entry!r}")
                parsed_row.append(complex(float(entry[0]), float(entry[1])))
            else:
                parsed_row.append(complex(float(entry), 0.0))
        parsed.append(parsed_row)
    matrix = np.array(parsed, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ValueError("matrix rows must have equal length")
    return matrix


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target


def write_json(path: PathLike, payload: Any) -> Path:
    return atomic_write_bytes(path, dumps(payload))


def read_json(path: PathLike) -> Any:
    return loads(Path(path).read_bytes())


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(cell) if isinstance(cell, float) else cell for cell in row])
    return atomic_write_bytes(path, buffer.getvalue().encode("utf-8"))


__all__ = [
    "dumps",
    "loads",
    "complex_matrix_to_json",
    "complex_matrix_from_json",
    "atomic_write_bytes",
    "write_json",
    "read_json",
    "write_csv",
]
