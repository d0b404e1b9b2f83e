"""Task pipeline as a langgraph StateGraph: plan -> run_step -> advance -> finalize.

A single subcommand plans one step; ``all`` plans every applicable task for
every fixture descriptor, then one Clifford sweep. Steps run on a worker
thread so the numeric sweeps can start their own event loops.
"""

from __future__ import annotations

import asyncio
from pathlib import Path
from typing import List, Optional, TypedDict

from langgraph.graph import END, START, StateGraph

from core.errors import ConfigError
from fixtures_setup import FixtureSetup
from models.descriptors import load_descriptor
from shared.config import Tolerances

from .config import RunConfig, Task
from .tasks import TaskOutcome, applicable_tasks, run_task

RECURSION_LIMIT = 1000


class PlanStep(TypedDict, total=False):
    task: str
    model: Optional[str]


class RunState(TypedDict, total=False):
    run_config: RunConfig
    tolerances: Tolerances
    plan: List[PlanStep]
    step_index: int
    outcomes: List[TaskOutcome]
    logs: List[str]
    passed: bool
    failures: List[str]


def fixture_paths(directory: str) -> List[Path]:
    FixtureSetup(directory).initialize()
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise ConfigError(f"no model descriptors found in {directory}")
    return paths


def plan_steps(config: RunConfig) -> List[PlanStep]:
    if config.task != Task.all:
        return [{"task": config.task.value, "model": config.model}]
    steps: List[PlanStep] = []
    for path in fixture_paths(config.fixtures):
        descriptor = load_descriptor(path)
        steps += [{"task": task.value, "model": str(path)} for task in applicable_tasks(descriptor)]
    steps.append({"task": Task.clifford.value, "model": None})
    return steps


def execute_step(config: RunConfig, step: PlanStep, tol: Tolerances, logs: List[str]) -> TaskOutcome:
    task = Task(step["task"])
    sweep = config.task == Task.all
    update = {"task": task, "model": step.get("model")}
    if sweep:
        update.update({"levels": None, "signature": None, "winding": None})
    step_config = config.model_copy(update=update)
    descriptor = load_descriptor(step["model"]) if step.get("model") else None
    return run_task(step_config, descriptor, tol, logs, contain_errors=sweep)


async def _plan_node(state: RunState) -> RunState:
    config = state["run_config"]
    plan = plan_steps(config)
    logs = list(state.get("logs", []))
    logs.append(f"Planner -> Pipeline: {len(plan)} step(s) for task {config.task.value}")
    return {"plan": plan, "step_index": 0, "outcomes": [], "logs": logs}


async def _run_step_node(state: RunState) -> RunState:
    plan = state["plan"]
    idx = state.get("step_index", 0)
    logs = list(state.get("logs", []))
    if idx >= len(plan):
        return {"logs": logs}
    step = plan[idx]
    logs.append(f"Pipeline: executing step {idx + 1} -> {step['task']} {Path(step['model']).stem if step.get('model') else ''}".rstrip())
    step_logs: List[str] = []
    outcome = await asyncio.to_thread(execute_step, state["run_config"], step, state["tolerances"], step_logs)
    logs.extend(step_logs)
    logs.append(f"{step['task'].capitalize()} -> Pipeline: {'pass' if outcome.passed else 'fail'}")
    return {"outcomes": [*state.get("outcomes", []), outcome], "logs": logs}


async def _advance_node(state: RunState) -> RunState:
    return {"step_index": state.get("step_index", 0) + 1}


def _should_continue(state: RunState) -> str:
    if state.get("step_index", 0) < len(state.get("plan", [])):
        return "continue"
    return "done"


async def _finalize_node(state: RunState) -> RunState:
    outcomes = state.get("outcomes", [])
    logs = list(state.get("logs", []))
    failures = [f"{outcome.label}/{outcome.task.value}: {failure}" for outcome in outcomes for failure in outcome.failures]
    passed = bool(outcomes) and all(outcome.passed for outcome in outcomes)
    logs.append(f"Pipeline: finalized {len(outcomes)} step(s), {'all passed' if passed else f'{len(failures)} failure(s)'}")
    return {"passed": passed, "failures": failures, "logs": logs}


run_graph = StateGraph(RunState)
run_graph.add_node("plan", _plan_node)
run_graph.add_node("run_step", _run_step_node)
run_graph.add_node("advance", _advance_node)
run_graph.add_node("finalize", _finalize_node)

run_graph.add_edge(START, "plan")
run_graph.add_edge("plan", "run_step")
run_graph.add_edge("run_step", "advance")
run_graph.add_conditional_edges("advance", _should_continue, {"continue": "run_step", "done": "finalize"})
run_graph.add_edge("finalize", END)

compiled_run_graph = run_graph.compile()


async def run_pipeline(config: RunConfig, tolerances: Optional[Tolerances] = None) -> RunState:
    initial_state: RunState = {
        "run_config": config,
        "tolerances": tolerances or config.resolved_tolerances(),
        "logs": [],
    }
    return await compiled_run_graph.ainvoke(initial_state, config={"recursion_limit": RECURSION_LIMIT})


__all__ = [
    "PlanStep",
    "RunState",
    "fixture_paths",
    "plan_steps",
    "execute_step",
    "compiled_run_graph",
    "run_pipeline",
]
