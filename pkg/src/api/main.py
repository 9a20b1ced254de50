"""
FastAPI application for swarm-sling.

Run with:
    uvicorn src.api.main:app --reload
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from src import __version__
from src.api.routes import router
from src.config import configure_logging
from src.errors import SwarmSlingError


logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging()
    logger.info("Starting swarm-sling API")
    yield
    logger.info("Shutting down swarm-sling API")


app = FastAPI(
    title="swarm-sling API",
    description="""
    Planner and hover simulations for a payload carried by a quadrotor swarm.

    - POST /api/plan: fleet size, attachment points and recommendations
    - POST /api/hover: queue a hover simulation of a scenario
    - GET /api/hover/{task_id}: poll a simulation
    """,
    version=__version__,
    lifespan=lifespan,
)


@app.exception_handler(SwarmSlingError)
async def swarmsling_error_handler(request: Request, exc: SwarmSlingError):
    return JSONResponse(status_code=422, content={"detail": str(exc), "error": type(exc).__name__})


app.include_router(router)


@app.get("/")
async def root():
    """Root endpoint."""
    return {
        "message": "swarm-sling API",
        "docs": "/docs",
        "health": "/api/health",
    }
