"""Point-vehicle simulation of planned paths under current drift.

The vehicle flies the planned path leg by leg. A leg from waypoint ``A`` to
``B`` commands ``v_d`` along ``B - A`` and ends once the along-track progress
measured from ``A`` reaches ``|B - A|``. With compensation (``cbnnp``) the
command is ``v_d - v_cur`` and the vehicle lands exactly on ``B``; without it
(``bnnp``) the current pushes the vehicle off the line.

At every leg end the vehicle localises to its nearest cell. If that is not
the waypoint it believed it reached, the neural field is re-run from the
nearest cell and the new chain is followed from there. Once the nearest cell
is the destination the vehicle homes onto the destination centre until it is
within the capture radius.

Obstacle contact is sampled after every integration step. A collision is
recorded but, unless ``stop_on_collision`` is set, the point vehicle carries
on so that a later failure to arrive can also be flagged. Leaving the map or
exceeding the time limit ends the run as a failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from uuvplan import _kernels
from uuvplan.currentfield import CurrentSpec
from uuvplan.gridworld import GridMap, euclidean_distance
from uuvplan.neuroplanner import DEFAULT_KG, PlanPath, plan_bnnp

VARIANTS = ("bnnp", "cbnnp")
REACHED = "reached"
COLLISION = "collision"
FAIL = "fail"


@dataclass(frozen=True)
class SimLimits:
    """Integration and termination settings.

    ``time_factor`` scales the ideal travel time (planned length over speed)
    into the time limit. ``v_max`` is only reported against, never enforced.
    """

    dt: float = 0.01
    capture_radius: float = 0.25
    time_factor: float = 10.0
    speed: float = 1.0
    v_max: float = 2.0
    stop_on_collision: bool = False

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.capture_radius <= 0 or self.time_factor <= 0 or self.speed <= 0 or self.v_max <= 0:
            raise ValueError("capture_radius, time_factor, speed and v_max must be positive")


@dataclass
class Trajectory:
    variant: str
    times: np.ndarray
    positions: np.ndarray
    commanded: np.ndarray  # velocity commanded over the step ending at each sample (row 0 is zero)
    outcome: str
    collided: bool
    reached: bool
    traveled_length: float
    deviation_max: float
    plan: PlanPath
    end_reason: str = ""
    replans: int = 0
    saturated_steps: int = 0
    events: list = field(default_factory=list)

    @property
    def samples(self):
        return list(zip(self.times.tolist(), map(tuple, self.positions.tolist())))

    @property
    def cells(self) -> np.ndarray:
        return np.floor(self.positions + 0.5).astype(np.int64)

    @property
    def failed(self) -> bool:
        return not self.reached

    @property
    def flags(self) -> str:
        """Result label: ``""`` when cleanly reached, else ``"C"``, ``"F"`` or ``"C & F"``."""
        parts = []
        if self.collided:
            parts.append("C")
        if not self.reached:
            parts.append("F")
        return " & ".join(parts)


def classify_cell(position: Sequence[float], grid: GridMap) -> str:
    """``"free"``, ``"obstacle"`` or ``"out_of_bounds"`` for the cell containing ``position``."""
    if len(position) != grid.dims:
        raise ValueError(f"position {tuple(position)!r} does not match a {grid.dims}D map")
    cell = tuple(int(math.floor(p + 0.5)) for p in position)
    if not grid.in_bounds(cell):
        return "out_of_bounds"
    return "obstacle" if grid.is_obstacle(cell) else "free"


def path_length(points) -> float:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) < 2:
        raise ValueError("path_length needs at least two points")
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def polyline_distance(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Distance from each point to the polyline through ``vertices``."""
    points = np.asarray(points, dtype=float)
    vertices = np.asarray(vertices, dtype=float)
    if len(vertices) == 1:
        return np.linalg.norm(points - vertices[0], axis=1)
    a = vertices[:-1][None, :, :]
    ab = np.diff(vertices, axis=0)[None, :, :]
    ap = points[:, None, :] - a
    s = np.clip(np.sum(ap * ab, axis=2) / np.sum(ab * ab, axis=2), 0.0, 1.0)
    d = np.linalg.norm(ap - s[..., None] * ab, axis=2)
    return d.min(axis=1)


class _Buffers:
    def __init__(self, capacity: int):
        self.t = np.zeros(capacity)
        self.pos = np.zeros((capacity, 3))
        self.cmd = np.zeros((capacity, 3))

    def grow(self):
        cap = 2 * len(self.t)
        for name in ("t", "pos", "cmd"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:])
            new[: len(old)] = old
            setattr(self, name, new)


def _pad(cell, dims) -> np.ndarray:
    return np.array(tuple(cell) + (0,) * (3 - dims), dtype=float)


def simulate(
    grid: GridMap,
    plan: PlanPath,
    variant: str,
    current: CurrentSpec,
    dt: float | None = None,
    limits: SimLimits | None = None,
    destination: Sequence[int] | None = None,
    k_g: float = DEFAULT_KG,
) -> Trajectory:
    """Integrate the vehicle along ``plan`` and classify the outcome.

    ``destination`` defaults to the plan's last waypoint; pass it explicitly
    when the plan stopped short.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if not plan.waypoints:
        raise ValueError("empty plan")
    limits = limits or SimLimits()
    if dt is not None:
        limits = SimLimits(dt, limits.capture_radius, limits.time_factor, limits.speed,
                           limits.v_max, limits.stop_on_collision)
    dims = grid.dims
    dest_cell = tuple(destination) if destination is not None else tuple(plan.waypoints[-1])
    compensated = variant == "cbnnp"

    occ = grid.grid
    cur = current.params()
    dest = _pad(dest_cell, dims)
    origin = tuple(plan.waypoints[0])
    ideal = max(plan.length, euclidean_distance(origin, dest_cell)) / limits.speed
    t_limit = limits.time_factor * ideal

    buf = _Buffers(int(t_limit / limits.dt) + 16 * len(plan.waypoints) + 64)
    pos = _pad(origin, dims)
    buf.pos[0] = pos
    n, t = 1, 0.0
    collided = False
    reached = False
    end_reason = ""
    replans = 0
    events = []

    wps = [tuple(w) for w in plan.waypoints]
    k = 0
    zero3 = np.zeros(3)

    def run(leg_start, leg_dir, leg_len, homing):
        nonlocal n, t, collided
        while True:
            ev, t, n, hit = _kernels.integrate_leg(
                pos, t, leg_start, leg_dir, leg_len, limits.speed, homing, compensated,
                dest, limits.capture_radius, limits.dt, t_limit, occ, cur,
                buf.t, buf.pos, buf.cmd, n, limits.stop_on_collision,
            )
            collided = collided or hit
            if ev != _kernels.EV_BUFFER_FULL:
                return ev
            buf.grow()

    for _ in range(1_000_000):
        if np.linalg.norm(pos - dest) <= limits.capture_radius:
            reached = True
            end_reason = "captured"
            break
        cell = tuple(int(math.floor(p + 0.5)) for p in pos[:dims])
        homing = cell == dest_cell
        if not homing and cell != wps[k]:
            if grid.is_free(cell):
                replans += 1
                events.append((t, "replan", cell))
                wps = [tuple(w) for w in plan_bnnp(grid, cell, dest_cell, k_g).waypoints]
                k = 0
            # inside an obstacle: keep flying the current chain
        if homing:
            ev = run(zero3, zero3, 0.0, True)
        else:
            if k + 1 >= len(wps):
                end_reason = "plan_exhausted"
                break
            a, b = _pad(wps[k], dims), _pad(wps[k + 1], dims)
            seg = b - a
            seg_len = float(np.linalg.norm(seg))
            ev = run(a, seg / seg_len, seg_len, False)
            if ev == _kernels.EV_LEG_DONE:
                k += 1
        if ev in (_kernels.EV_LEG_DONE, _kernels.EV_CELL_CHANGED):
            continue
        if ev == _kernels.EV_CAPTURED:
            reached = True
            end_reason = "captured"
        elif ev == _kernels.EV_OUT_OF_BOUNDS:
            end_reason = "out_of_bounds"
        elif ev == _kernels.EV_TIMEOUT:
            end_reason = "timeout"
        elif ev == _kernels.EV_COLLISION:
            end_reason = "collision"
        break
    else:
        end_reason = "no_progress"

    times = buf.t[:n].copy()
    positions = buf.pos[:n, :dims].copy()
    commanded = buf.cmd[:n, :dims].copy()
    if n > 1:
        traveled = path_length(positions)
        saturated = int(np.sum(np.linalg.norm(commanded[1:], axis=1) > limits.v_max))
    else:
        traveled, saturated = 0.0, 0
    deviation = float(polyline_distance(positions, np.array(plan.waypoints, dtype=float)).max())
    if collided:
        outcome = COLLISION
    elif reached:
        outcome = REACHED
    else:
        outcome = FAIL
    return Trajectory(
        variant=variant,
        times=times,
        positions=positions,
        commanded=commanded,
        outcome=outcome,
        collided=collided,
        reached=reached,
        traveled_length=traveled,
        deviation_max=deviation,
        plan=plan,
        end_reason=end_reason,
        replans=replans,
        saturated_steps=saturated,
        events=events,
    )
