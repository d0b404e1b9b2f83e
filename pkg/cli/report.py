"""Report assembly and atomic output.

Floats are rounded to 12 significant digits so reports from identical
configs compare byte for byte; the model descriptor is copied verbatim.
"""

from __future__ import annotations

import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from shared.config import REPORT_SCHEMA, REPORT_VERSION, Tolerances
from shared.jsonio import write_csv, write_json

from .config import Task
from .tasks import TaskOutcome

SIGNIFICANT_DIGITS = 12
VERBATIM_KEYS = ("model",)


def round_floats(value: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    if isinstance(value, float):
        if not math.isfinite(value) or value == 0.0:
            return value
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {key: item if key in VERBATIM_KEYS else round_floats(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(item, digits) for item in value]
    return value


def outcome_payload(outcome: TaskOutcome) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "task": outcome.task.value,
        "model": outcome.model,
        "levels": outcome.levels,
        "passed": outcome.passed,
        "failures": outcome.failures,
        **outcome.sections,
    }
    if outcome.expected_failure:
        payload["expected_failure"] = True
    return payload


def build_report(
    task: Task,
    outcomes: Sequence[TaskOutcome],
    tolerances: Tolerances,
    logs: Optional[List[str]] = None,
    timestamp: Optional[str] = None,
) -> Dict[str, Any]:
    """Single tasks inline their one outcome; ``all`` lists every step under "steps"."""

    passed = all(outcome.passed for outcome in outcomes)
    failures = [f"{outcome.label}/{outcome.task.value}: {failure}" for outcome in outcomes for failure in outcome.failures]
    report: Dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "version": REPORT_VERSION,
        "task": task.value,
        "tolerances": tolerances.model_dump(),
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "passed": passed,
        "failures": failures,
    }
    if task == Task.all or len(outcomes) != 1:
        report["steps"] = [outcome_payload(outcome) for outcome in outcomes]
    else:
        single = outcome_payload(outcomes[0])
        single.pop("passed")
        single.pop("failures")
        report.update(single)
    if logs is not None:
        report["logs"] = list(logs)
    return round_floats(report)


def report_stem(task: Task, outcomes: Sequence[TaskOutcome]) -> str:
    if task in (Task.all, Task.clifford) or not outcomes:
        return task.value
    return f"{task.value}-{outcomes[0].label}"


def csv_sort_key(row: Sequence[Any]) -> tuple:
    """(quantity, s or t, N, model); a missing N sorts first."""

    return (row[1], row[2], -1 if row[3] is None else row[3], row[0])


def write_outputs(report: Dict[str, Any], outcomes: Sequence[TaskOutcome], out_dir: str, stem: str) -> List[Path]:
    """Write the JSON report and, when any outcome carries rows, one CSV per header."""

    target = Path(out_dir)
    written = [write_json(target / f"{stem}.json", report)]
    by_header: Dict[tuple, List[List[Any]]] = {}
    for outcome in outcomes:
        if outcome.csv_rows:
            by_header.setdefault(tuple(outcome.csv_header), []).extend(outcome.csv_rows)
    for header, rows in by_header.items():
        suffix = "heat" if "t" in header else "convergence"
        written.append(write_csv(target / f"{stem}-{suffix}.csv", list(header), sorted(rows, key=csv_sort_key)))
    return written


__all__ = ["SIGNIFICANT_DIGITS", "round_floats", "outcome_payload", "build_report", "report_stem", "csv_sort_key", "write_outputs"]
