"""
swarm-sling command line.

Subcommands:
    plan    fleet size and attachment geometry for a payload (exit 0/2/3)
    hover   simulate a scenario and write the hover CSV
    track   closed-loop single-quadrotor tracking run
    check   recompute the invariants of a hover CSV

Malformed input, divergence and invariant breaches exit with status 1.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from src.config import configure_logging, get_settings
from src.data_models import (
    Gains,
    IntegratorConfig,
    PayloadParams,
    PlannerRequest,
    PlanScenario,
    QuadrotorParams,
    RadiusPolicy,
)
from src.errors import DegenerateHeading, Diverged, SchemaError, SwarmSlingError
from src.geometry import rot_z
from src.integrator import simulate, simulate_tracking
from src.planner import plan, plan_sweep
from src.quadrotor import QuadState
from src.scenario import Scenario, default_scenario_path, load_scenario
from src.timeseries import (
    check_frame,
    hover_columns,
    read_series_csv,
    summarize_hover,
    summarize_tracking,
    write_column_map,
    write_frame,
)
from src.trajectory import TableTrajectory, builtin_trajectory


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CODES = {
    PlanScenario.FEASIBLE: 0,
    PlanScenario.FEASIBLE_WITH_CAUTION: 2,
    PlanScenario.INFEASIBLE: 3,
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _dims(text: str) -> tuple[float, float, float]:
    parts = text.lower().split("x")
    try:
        dims = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LxWxH in metres, got '{text}'")
    if len(dims) != 3 or min(dims) <= 0:
        raise argparse.ArgumentTypeError(f"expected three positive dimensions LxWxH, got '{text}'")
    return dims


# =============================================================================
# plan
# =============================================================================

def _planner_request(args, thrust: float, radius: float) -> PlannerRequest:
    g = args.gravity
    payload_mass = args.payload_mass_kg if args.payload_mass_kg is not None else args.payload_weight_n / g
    quad_mass = args.quad_mass_kg if args.quad_mass_kg is not None else args.quad_weight_n / g
    return PlannerRequest(
        payload=PayloadParams(mass=payload_mass, dims=args.dims_m),
        quad=QuadrotorParams(mass=quad_mass, gravity=g, max_thrust=thrust, prop_radius=radius),
        safety_factor=args.safety_factor,
        hover_height=args.hover_height_m,
        radius_policy=args.radius_policy,
    )


def _sweep(args) -> int:
    grid = pd.read_csv(args.sweep)
    missing = {"thrust_n", "quad_radius_m"} - set(grid.columns)
    if missing:
        raise SchemaError(f"sweep grid {args.sweep} is missing columns: {sorted(missing)}")
    requests = [
        _planner_request(args, float(row.thrust_n), float(row.quad_radius_m))
        for row in grid.itertuples(index=False)
    ]
    results = plan_sweep(requests, workers=args.workers)
    rows = []
    for req, result in zip(requests, results):
        rec = result.recommendation
        rows.append({
            "thrust_n": req.quad.max_thrust,
            "quad_radius_m": req.quad.prop_radius,
            "n": result.n,
            "scenario": result.scenario.value,
            "n_raw": result.n_raw,
            "n_min": result.n_min,
            "n_fs": result.n_fs,
            "alpha_rad": result.alpha,
            "r_circ_m": result.r_circ,
            "max_radius_m": None if rec is None else rec.max_radius,
            "min_thrust_n": None if rec is None else rec.min_thrust,
        })
    frame = pd.DataFrame(rows)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        write_frame(frame, args.out)
        print(f"Wrote {len(frame)} plans to {args.out}")
    else:
        print(frame.to_string(index=False))
    return EXIT_OK


def cmd_plan(args) -> int:
    """Plan one configuration (or a sweep grid) and report it."""
    if args.sweep:
        return _sweep(args)
    if args.thrust_n is None or args.quad_radius_m is None:
        raise SchemaError("plan needs --thrust-n and --quad-radius-m (or --sweep)")

    result = plan(_planner_request(args, args.thrust_n, args.quad_radius_m))
    report = json.dumps(result.to_report(), indent=2)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(report + "\n")
    print(report)
    return EXIT_CODES[result.scenario]


# =============================================================================
# hover
# =============================================================================

def _hover_output(args, scenario: Scenario) -> Path:
    if args.out:
        return Path(args.out)
    if scenario.output.series:
        return Path(scenario.output.series)
    return get_settings().output_dir / f"{scenario.name}.csv"


def cmd_hover(args) -> int:
    """Simulate a scenario, write its CSV and print the drift summary."""
    scenario = load_scenario(args.scenario or default_scenario_path())
    updates = {}
    if args.t_final is not None:
        updates["t_final"] = args.t_final
    if args.dt is not None:
        updates["dt"] = args.dt
    cfg = IntegratorConfig.model_validate({**scenario.integrator.model_dump(), **updates})

    params = scenario.swarm_params()
    try:
        series = simulate(scenario.initial_state(params), scenario.input_policy(params), params, cfg)
    except Diverged as exc:
        print(f"error: simulation diverged at t = {exc.t:.6g} s: {exc}", file=sys.stderr)
        return EXIT_ERROR

    out = series.write_csv(_hover_output(args, scenario), params)
    column_map = args.column_map or scenario.output.column_map
    if column_map:
        write_column_map(column_map, hover_columns(params.n))

    frame = series.to_frame(params)
    summary = summarize_hover(frame)
    report = check_frame(frame, params)
    print(f"{scenario.name}: {summary.line()}")
    print(f"Wrote {len(series)} samples to {out}")
    if not report.passed:
        v = report.violation
        print(f"error: invariant '{v.invariant}' violated at row {v.row} ({v.value:.3e})", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


# =============================================================================
# track
# =============================================================================

def _trajectory(args):
    if args.table:
        return TableTrajectory.from_csv(args.table)
    kwargs = {}
    if args.trajectory == "circle":
        kwargs = {"radius": args.radius_m, "period": args.period_s}
    return builtin_trajectory(args.trajectory, **kwargs)


def cmd_track(args) -> int:
    """Closed-loop tracking run of one quadrotor; writes the error CSV."""
    params = QuadrotorParams()
    gains = Gains.default_for(params)
    traj = _trajectory(args)
    start = traj.sample(0.0)
    initial = QuadState(
        x=start.x + np.asarray(args.offset_m, dtype=float),
        v=start.v.copy(),
        R=rot_z(args.yaw0_rad),
        Omega=np.zeros(3),
    )
    cfg = IntegratorConfig(dt=args.dt, t_final=args.t_final)
    try:
        frame = simulate_tracking(initial, traj, gains, params, cfg, saturate=args.saturate)
    except DegenerateHeading as exc:
        print(f"error: controller singularity at t = {exc.t}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Diverged as exc:
        print(f"error: tracking run diverged at t = {exc.t:.6g} s: {exc}", file=sys.stderr)
        return EXIT_ERROR

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_frame(frame, out)
    summary = summarize_tracking(frame, args.window_s)
    print(json.dumps(summary.model_dump(), indent=2))
    print(f"Wrote {len(frame)} samples to {out}")
    return EXIT_OK


# =============================================================================
# check
# =============================================================================

def cmd_check(args) -> int:
    """Recompute the invariants of a hover CSV; exit 0 iff all pass."""
    frame = read_series_csv(args.series)
    params = load_scenario(args.scenario).swarm_params() if args.scenario else None
    report = check_frame(frame, params, tol=args.tol)
    for name, value in report.defects.items():
        print(f"{name:15s} max defect {value:.3e}")
    if report.passed:
        print(f"PASS: {report.rows} rows within {report.tolerance:g}")
        return EXIT_OK
    v = report.violation
    print(f"FAIL: invariant '{v.invariant}' violated at row {v.row} ({v.value:.3e})")
    return EXIT_ERROR


# =============================================================================
# Entry point
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swarmsling", description="Payload transport by a quadrotor swarm on rigid links")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING ... (default from SWARMSLING_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="fleet size and attachment points")
    payload = p.add_mutually_exclusive_group()
    payload.add_argument("--payload-weight-n", type=float, default=14.715)
    payload.add_argument("--payload-mass-kg", type=float, default=None)
    quad = p.add_mutually_exclusive_group()
    quad.add_argument("--quad-weight-n", type=float, default=7.4066)
    quad.add_argument("--quad-mass-kg", type=float, default=None)
    p.add_argument("--thrust-n", type=float, default=None, help="per-vehicle thrust capability")
    p.add_argument("--quad-radius-m", type=float, default=None, help="centre-to-propeller-tip radius")
    p.add_argument("--dims-m", type=_dims, default=(1.0, 0.8, 0.2), help="payload LxWxH")
    p.add_argument("--safety-factor", type=float, default=1.2)
    p.add_argument("--hover-height-m", type=float, default=1.0)
    p.add_argument("--radius-policy", type=RadiusPolicy, choices=list(RadiusPolicy), default=RadiusPolicy.CIRCUMRADIUS)
    p.add_argument("--gravity", type=float, default=9.81)
    p.add_argument("--sweep", default=None, help="CSV grid with thrust_n,quad_radius_m columns")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None, help="report JSON (or sweep CSV) path")
    p.set_defaults(func=cmd_plan)

    h = sub.add_parser("hover", help="simulate a hover scenario")
    h.add_argument("--scenario", default=None, help="scenario JSON (default: three-quadrotor example)")
    h.add_argument("--out", default=None, help="CSV path")
    h.add_argument("--column-map", default=None, help="write a gnuplot column map here")
    h.add_argument("--t-final", type=float, default=None)
    h.add_argument("--dt", type=float, default=None)
    h.set_defaults(func=cmd_hover)

    t = sub.add_parser("track", help="single-quadrotor tracking run")
    source = t.add_mutually_exclusive_group()
    source.add_argument("--trajectory", choices=["hover", "circle", "line"], default="hover")
    source.add_argument("--table", default=None, help="trajectory table CSV")
    t.add_argument("--out", required=True)
    t.add_argument("--offset-m", type=float, nargs=3, default=(0.0, 0.0, 0.0), metavar=("X", "Y", "Z"))
    t.add_argument("--yaw0-rad", type=float, default=0.0)
    t.add_argument("--saturate", action="store_true", help="clip rotor thrusts to [0, T_max/4]")
    t.add_argument("--t-final", type=float, default=10.0)
    t.add_argument("--dt", type=float, default=1e-3)
    t.add_argument("--radius-m", type=float, default=1.0)
    t.add_argument("--period-s", type=float, default=10.0)
    t.add_argument("--window-s", type=float, default=1.0, help="final window for the error statistics")
    t.set_defaults(func=cmd_track)

    c = sub.add_parser("check", help="recompute invariants of a hover CSV")
    c.add_argument("series")
    c.add_argument("--scenario", default=None, help="scenario JSON enabling the link-length check")
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        return args.func(args)
    except (SwarmSlingError, ValidationError, FileNotFoundError, pd.errors.ParserError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
