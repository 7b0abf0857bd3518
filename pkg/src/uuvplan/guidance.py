"""Current compensation by the parallelogram law.

The vehicle commands ``v_plan = v_d - v_cur`` so that its resultant motion
``v_plan + v_cur`` equals the desired velocity ``v_d`` taken from the planned
grid path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from uuvplan.currentfield import CurrentSpec, sample
from uuvplan.gridworld import GridMap, euclidean_distance
from uuvplan.neuroplanner import DEFAULT_KG, PlanPath, plan_bnnp

DEFAULT_SPEED = 1.0
DEFAULT_VMAX = 2.0


@dataclass(frozen=True)
class VelocityTriple:
    t: float
    v_d: np.ndarray
    v_cur: np.ndarray
    v_plan: np.ndarray


def desired_velocity(src: Sequence[int], dst: Sequence[int], speed: float = DEFAULT_SPEED) -> np.ndarray:
    """Velocity of magnitude ``speed`` pointing from cell ``src`` to cell ``dst``."""
    if len(src) != len(dst):
        raise ValueError(f"arity mismatch: {tuple(src)!r} vs {tuple(dst)!r}")
    d = np.asarray(dst, dtype=float) - np.asarray(src, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise ValueError(f"zero displacement from {tuple(src)!r}")
    return speed * d / norm


def compensate(v_d, v_cur) -> np.ndarray:
    v_d = np.asarray(v_d, dtype=float)
    v_cur = np.asarray(v_cur, dtype=float)
    if v_d.shape != v_cur.shape:
        raise ValueError(f"arity mismatch: {v_d.shape} vs {v_cur.shape}")
    return v_d - v_cur


def feasibility_check(v_plan, v_max: float = DEFAULT_VMAX, cap: bool = False) -> tuple[str, np.ndarray]:
    """Return ``("feasible" | "saturated", v)``; ``v`` is capped at ``v_max`` only if ``cap``."""
    if v_max <= 0:
        raise ValueError(f"v_max must be positive, got {v_max}")
    v = np.asarray(v_plan, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm <= v_max:
        return "feasible", v
    return "saturated", (v * (v_max / norm) if cap else v)


@dataclass(frozen=True)
class CompensatedPlan:
    path: PlanPath
    schedule: tuple  # of VelocityTriple, one per segment
    saturated: tuple  # segment indices whose v_plan exceeds v_max

    @property
    def waypoints(self):
        return self.path.waypoints


def plan_cbnnp(
    grid: GridMap,
    origin: Sequence[int],
    destination: Sequence[int],
    k_g: float = DEFAULT_KG,
    current: CurrentSpec | None = None,
    speed: float = DEFAULT_SPEED,
    v_max: float = DEFAULT_VMAX,
) -> CompensatedPlan:
    """Plan the grid path, then derive each segment's commanded velocity.

    The current is sampled at each segment's nominal start time and held for
    the segment. The path itself never depends on the current.
    """
    current = current or CurrentSpec(kind="static3d" if grid.dims == 3 else "static2d")
    path = plan_bnnp(grid, origin, destination, k_g)
    schedule, saturated = [], []
    t = 0.0
    for k, (a, b) in enumerate(zip(path.waypoints, path.waypoints[1:])):
        v_d = desired_velocity(a, b, speed)
        v_cur = sample(current, a, t, dims=grid.dims)
        v_plan = compensate(v_d, v_cur)
        if feasibility_check(v_plan, v_max)[0] == "saturated":
            saturated.append(k)
        schedule.append(VelocityTriple(t, v_d, v_cur, v_plan))
        t += euclidean_distance(a, b) / speed
    return CompensatedPlan(path, tuple(schedule), tuple(saturated))
