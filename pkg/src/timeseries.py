"""
Sampled simulation output: CSV emission, reading back and invariant checks.

Hover CSV layout (one row per sample, quadrotors numbered from 1):

    t, x0x x0y x0z, v0x v0y v0z, R0_11 .. R0_33 (row-major), W0x W0y W0z,
    then per quadrotor i:
    q{i}x q{i}y q{i}z, w{i}x w{i}y w{i}z, x{i}x x{i}y x{i}z,
    R{i}_11 .. R{i}_33, W{i}x W{i}y W{i}z

Numbers are written with 17 significant digits so a write/read cycle is
exact.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from pydantic import BaseModel, Field

from src.errors import SchemaError
from src.geometry import TAU_ORTH
from src.swarm.state import SwarmParams, SwarmState


logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
AXES = ("x", "y", "z")

TRACK_COLUMNS = (
    ["t"]
    + [f"ex{k}" for k in (1, 2, 3)]
    + [f"ev{k}" for k in (1, 2, 3)]
    + ["Psi"]
    + [f"eR{k}" for k in (1, 2, 3)]
    + [f"eW{k}" for k in (1, 2, 3)]
    + ["f"]
    + [f"M{k}" for k in (1, 2, 3)]
    + [f"f{k}" for k in (1, 2, 3, 4)]
)


# =============================================================================
# Column layout
# =============================================================================

def _vec(prefix: str) -> list[str]:
    return [f"{prefix}{a}" for a in AXES]


def _mat(prefix: str) -> list[str]:
    return [f"{prefix}_{r}{c}" for r in (1, 2, 3) for c in (1, 2, 3)]


def payload_columns() -> list[str]:
    return ["t"] + _vec("x0") + _vec("v0") + _mat("R0") + _vec("W0")


def quad_columns(i: int) -> list[str]:
    return _vec(f"q{i}") + _vec(f"w{i}") + _vec(f"x{i}") + _mat(f"R{i}") + _vec(f"W{i}")


def hover_columns(n: int) -> list[str]:
    columns = payload_columns()
    for i in range(1, n + 1):
        columns += quad_columns(i)
    return columns


def infer_fleet_size(columns) -> int:
    """Number of quadrotors implied by a hover CSV header."""
    n = 0
    while set(quad_columns(n + 1)).issubset(columns):
        n += 1
    return n


# =============================================================================
# Time series
# =============================================================================

@dataclass
class TimeSeries:
    """Packed swarm states (one row per sample) plus the inputs applied at each sample."""
    t: NDArray[np.float64]
    states: NDArray[np.float64]
    n: int
    thrusts: Optional[NDArray[np.float64]] = None
    moments: Optional[NDArray[np.float64]] = None

    def __len__(self) -> int:
        return len(self.t)

    def state(self, k: int) -> SwarmState:
        return SwarmState.from_vector(self.states[k], self.n)

    def to_frame(self, params: SwarmParams) -> pd.DataFrame:
        """Hover CSV layout; quadrotor positions are reconstructed from the links."""
        n, rows = self.n, len(self)
        k = 18
        q = self.states[:, k:k + 3 * n].reshape(rows, n, 3)
        k += 3 * n
        omega = self.states[:, k:k + 3 * n].reshape(rows, n, 3)
        k += 3 * n
        rot = self.states[:, k:k + 9 * n].reshape(rows, n, 9)
        k += 9 * n
        body_rate = self.states[:, k:k + 3 * n].reshape(rows, n, 3)

        x0 = self.states[:, 0:3]
        r0 = self.states[:, 6:15].reshape(rows, 3, 3)
        positions = (
            x0[:, None, :]
            + np.einsum("kij,nj->kni", r0, params.rho)
            - params.lengths[None, :, None] * q
        )

        blocks = [self.t[:, None], self.states[:, 0:18]]
        for i in range(n):
            blocks += [q[:, i], omega[:, i], positions[:, i], rot[:, i], body_rate[:, i]]
        return pd.DataFrame(np.hstack(blocks), columns=hover_columns(n))

    def write_csv(self, path: str | Path, params: SwarmParams) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_frame(self.to_frame(params), path)
        return path


def write_frame(frame: pd.DataFrame, path: str | Path) -> None:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)


def read_series_csv(path: str | Path) -> pd.DataFrame:
    """
    Read a hover CSV.

    Raises:
        SchemaError: for an empty file, missing payload columns, a non-numeric
            cell or no rows
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"series file not found: {path}")
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError as exc:
        raise SchemaError(f"{path} is empty") from exc
    missing = [c for c in payload_columns() if c not in frame.columns]
    if missing:
        raise SchemaError(f"{path} is missing payload columns: {missing}")
    for column in frame.columns:
        if pd.api.types.is_numeric_dtype(frame[column]):
            continue
        numeric = pd.to_numeric(frame[column], errors="coerce")
        bad = np.flatnonzero((numeric.isna() & frame[column].notna()).to_numpy())
        if bad.size:
            row = int(bad[0])
            raise SchemaError(
                f"{path}: non-numeric value {frame[column].iloc[row]!r} in column '{column}' at row {row}"
            )
        frame[column] = numeric
    if infer_fleet_size(frame.columns) < 1:
        raise SchemaError(f"{path} has no complete quadrotor column block")
    if len(frame) == 0:
        raise SchemaError(f"{path} has no rows")
    return frame


def write_column_map(path: str | Path, columns: list[str]) -> Path:
    """gnuplot-style column index file: one '<index> <name>' line per column, 1-based."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{k} {name}\n" for k, name in enumerate(columns, start=1)))
    return path


# =============================================================================
# Invariant checks
# =============================================================================

class Violation(BaseModel):
    invariant: str
    row: int = Field(..., description="0-based data row")
    value: float


class InvariantReport(BaseModel):
    """Worst defect per invariant over all rows, and the earliest violation."""
    rows: int
    tolerance: float
    defects: dict[str, float]
    violation: Optional[Violation] = None

    @property
    def passed(self) -> bool:
        return self.violation is None


def _column_block(frame: pd.DataFrame, names: list[str]) -> NDArray[np.float64]:
    return frame[names].to_numpy(dtype=float)


def _frame_defects(frame: pd.DataFrame, params: Optional[SwarmParams]) -> dict[str, NDArray[np.float64]]:
    """Per-row defect of every invariant, shape (rows,) each."""
    n = infer_fleet_size(frame.columns)
    rows = len(frame)
    rotations = [_column_block(frame, _mat("R0")).reshape(rows, 3, 3)]
    rotations += [_column_block(frame, _mat(f"R{i}")).reshape(rows, 3, 3) for i in range(1, n + 1)]
    rot = np.stack(rotations, axis=1)
    gram = np.einsum("rnji,rnjk->rnik", rot, rot) - np.eye(3)
    q = np.stack([_column_block(frame, _vec(f"q{i}")) for i in range(1, n + 1)], axis=1)
    omega = np.stack([_column_block(frame, _vec(f"w{i}")) for i in range(1, n + 1)], axis=1)

    defects = {
        "finite": np.where(np.all(np.isfinite(frame.to_numpy(dtype=float)), axis=1), 0.0, np.inf),
        "orthonormality": np.max(np.linalg.norm(gram, axis=(2, 3)), axis=1),
        "determinant": np.max(np.abs(np.linalg.det(rot) - 1.0), axis=1),
        "link_norm": np.max(np.abs(np.linalg.norm(q, axis=2) - 1.0), axis=1),
        "transversality": np.max(np.abs(np.sum(q * omega, axis=2)), axis=1),
    }
    if params is not None:
        if params.n != n:
            raise SchemaError(f"series has {n} quadrotors but the scenario describes {params.n}")
        x0 = _column_block(frame, _vec("x0"))
        x = np.stack([_column_block(frame, _vec(f"x{i}")) for i in range(1, n + 1)], axis=1)
        attach = x0[:, None, :] + np.einsum("kij,nj->kni", rot[:, 0], params.rho)
        length = np.linalg.norm(x - attach, axis=2)
        defects["link_length"] = np.max(np.abs(length - params.lengths[None, :]), axis=1)
    return defects


def check_frame(
    frame: pd.DataFrame,
    params: Optional[SwarmParams] = None,
    tol: float = TAU_ORTH,
) -> InvariantReport:
    """
    Recompute every state invariant on a hover frame.

    The link-length invariant needs the attachment geometry, so it is only
    checked when `params` is given.
    """
    per_row = _frame_defects(frame, params)
    violation = None
    for name, values in per_row.items():
        bad = np.flatnonzero(~(values <= tol))
        if bad.size and (violation is None or bad[0] < violation.row):
            violation = Violation(invariant=name, row=int(bad[0]), value=float(values[bad[0]]))
    defects = {name: float(np.max(values)) for name, values in per_row.items()}
    if violation is not None:
        logger.warning(f"Invariant '{violation.invariant}' violated at row {violation.row} ({violation.value:.3e})")
    return InvariantReport(rows=len(frame), tolerance=tol, defects=defects, violation=violation)


# =============================================================================
# Summaries
# =============================================================================

class HoverSummary(BaseModel):
    """Drift and manifold defects of a hover run."""
    samples: int
    t_final: float
    max_abs_dz: float = Field(..., description="max |x0z(t) - x0z(0)| (m)")
    max_dx0: float = Field(..., description="max ||x0(t) - x0(0)|| (m)")
    max_orthonormality_defect: float
    max_link_norm_defect: float

    def line(self) -> str:
        return (
            f"samples={self.samples} t_final={self.t_final:g}s "
            f"max|dz|={self.max_abs_dz:.3e}m max|dx0|={self.max_dx0:.3e}m "
            f"orth_defect={self.max_orthonormality_defect:.3e} link_norm_defect={self.max_link_norm_defect:.3e}"
        )


def summarize_hover(frame: pd.DataFrame) -> HoverSummary:
    x0 = _column_block(frame, _vec("x0"))
    drift = x0 - x0[0]
    defects = _frame_defects(frame, None)
    return HoverSummary(
        samples=len(frame),
        t_final=float(frame["t"].iloc[-1]),
        max_abs_dz=float(np.max(np.abs(drift[:, 2]))),
        max_dx0=float(np.max(np.linalg.norm(drift, axis=1))),
        max_orthonormality_defect=float(np.max(defects["orthonormality"])),
        max_link_norm_defect=float(np.max(defects["link_norm"])),
    )


class TrackingSummary(BaseModel):
    """Error statistics over the final window of a tracking run."""
    window_s: float
    final_ex_norm: float
    final_psi: float
    max_ex_norm_in_window: float
    max_psi_in_window: float
    rms_ex_norm_in_window: float


def summarize_tracking(frame: pd.DataFrame, window_s: float = 1.0) -> TrackingSummary:
    t = frame["t"].to_numpy(dtype=float)
    window = frame[t >= t[-1] - window_s]
    ex = np.linalg.norm(window[["ex1", "ex2", "ex3"]].to_numpy(dtype=float), axis=1)
    psi = window["Psi"].to_numpy(dtype=float)
    return TrackingSummary(
        window_s=window_s,
        final_ex_norm=float(ex[-1]),
        final_psi=float(psi[-1]),
        max_ex_norm_in_window=float(np.max(ex)),
        max_psi_in_window=float(np.max(psi)),
        rms_ex_norm_in_window=float(np.sqrt(np.mean(ex**2))),
    )
