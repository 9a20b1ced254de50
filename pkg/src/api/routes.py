"""
FastAPI routes for the planner and hover simulations.
"""

import logging
import uuid
from datetime import datetime
from typing import Dict

from fastapi import APIRouter, BackgroundTasks, HTTPException

from src import __version__
from src.api.models import (
    HealthResponse,
    HoverStatusResponse,
    HoverTaskResponse,
    PlanRequestBody,
    PlanResponse,
    TaskStatus,
)
from src.integrator import simulate
from src.planner import plan
from src.scenario import Scenario
from src.timeseries import check_frame, summarize_hover


logger = logging.getLogger(__name__)


# =============================================================================
# Global State (in-process; tasks are lost on restart)
# =============================================================================

MAX_TASKS = 256

tasks: Dict[str, dict] = {}


def evict_finished_tasks() -> None:
    """Drop the oldest completed/failed tasks until there is room for one more."""
    finished = [
        task_id for task_id, task in tasks.items()
        if task["status"] in (TaskStatus.COMPLETED, TaskStatus.FAILED)
    ]
    while len(tasks) >= MAX_TASKS and finished:
        evicted = finished.pop(0)
        del tasks[evicted]
        logger.debug(f"Evicted hover task {evicted}")


# =============================================================================
# Router
# =============================================================================

router = APIRouter(prefix="/api", tags=["swarm-sling"])


# =============================================================================
# Background Task
# =============================================================================

def run_hover_task(task_id: str, scenario: Scenario):
    """Run a hover simulation and store its summary on the task."""
    task = tasks[task_id]
    try:
        task["status"] = TaskStatus.RUNNING
        params = scenario.swarm_params()
        series = simulate(
            scenario.initial_state(params),
            scenario.input_policy(params),
            params,
            scenario.integrator,
        )
        frame = series.to_frame(params)
        task["summary"] = summarize_hover(frame)
        task["invariants_passed"] = check_frame(frame, params).passed
        task["status"] = TaskStatus.COMPLETED
    except Exception as e:
        logger.warning(f"Hover task {task_id} failed: {e}")
        task["status"] = TaskStatus.FAILED
        task["error"] = str(e)
    finally:
        task["completed_at"] = datetime.now()


# =============================================================================
# Endpoints
# =============================================================================

@router.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint."""
    return HealthResponse(status="healthy", version=__version__, tasks=len(tasks))


@router.post("/plan", response_model=PlanResponse)
async def create_plan(body: PlanRequestBody):
    """Plan a fleet; the verdict is in `scenario` rather than the HTTP status."""
    return plan(body.to_request()).to_report()


@router.post("/hover", response_model=HoverTaskResponse)
async def start_hover(scenario: Scenario, background_tasks: BackgroundTasks):
    """Queue a hover simulation of the given scenario."""
    evict_finished_tasks()
    task_id = str(uuid.uuid4())
    tasks[task_id] = {
        "task_id": task_id,
        "status": TaskStatus.PENDING,
        "scenario": scenario.name,
        "created_at": datetime.now(),
        "completed_at": None,
        "summary": None,
        "invariants_passed": None,
        "error": None,
    }
    background_tasks.add_task(run_hover_task, task_id, scenario)
    return HoverTaskResponse(task_id=task_id, status=TaskStatus.PENDING, message="Hover simulation queued")


@router.get("/hover/{task_id}", response_model=HoverStatusResponse)
async def get_hover_status(task_id: str):
    """Get the status of a hover simulation."""
    if task_id not in tasks:
        raise HTTPException(status_code=404, detail="Task not found")
    return HoverStatusResponse(**tasks[task_id])
