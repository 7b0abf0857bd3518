"""Discrete-time neural field planner over occupancy grids (BNNP).

Each cell hosts a neuron. From the currently excited neuron ``j`` every
receptive-field neighbour ``i`` is scored as

    a_i = g(a_j + exp(-||i - D||) + I_i)

with ``g(x) = -1`` for ``x < 0`` and ``k_g * x`` otherwise, and external input
``I_i`` of -1 (obstacle), 0 (already covered) or +1 (fresh). The neighbour with
the highest activity becomes the next waypoint; ties go to the first neighbour
in lexicographic offset order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from uuvplan import _kernels
from uuvplan.gridworld import Cell, GridMap, euclidean_distance, neighbor_offsets, neighbors

DEFAULT_KG = 0.5

REACHED = "reached"
TRAPPED = "trapped"
STEP_LIMIT = "step_limit"
_STATUS = {
    _kernels.PLAN_REACHED: REACHED,
    _kernels.PLAN_TRAPPED: TRAPPED,
    _kernels.PLAN_STEP_LIMIT: STEP_LIMIT,
}


class PlanningError(ValueError):
    """Bad planner input (endpoint on an obstacle, out of bounds, ...)."""


class Trapped(RuntimeError):
    """Every neighbour of the current cell is an obstacle."""


def _check_gain(k_g: float) -> None:
    if not 0.0 < k_g <= 1.0:
        raise PlanningError(f"k_g must lie in (0, 1], got {k_g}")


def transfer(x: float, k_g: float = DEFAULT_KG) -> float:
    """Piecewise-linear transfer: -1 below zero, ``k_g * x`` otherwise."""
    return -1.0 if x < 0 else k_g * x


@dataclass
class NeuralField:
    """Activity store and coverage bookkeeping for one planning run."""

    grid: GridMap
    destination: Cell
    k_g: float = DEFAULT_KG
    activities: np.ndarray = field(init=False)
    covered: set = field(default_factory=set)

    def __post_init__(self):
        _check_gain(self.k_g)
        self.destination = tuple(self.destination)
        if not self.grid.is_free(self.destination):
            raise PlanningError(f"destination {self.destination!r} is out of bounds or an obstacle")
        self.activities = np.zeros(self.grid.extent)

    def activity(self, cell: Sequence[int]) -> float:
        return float(self.activities[tuple(cell)])


def external_input(grid: GridMap, covered, cell: Sequence[int]) -> float:
    cell = tuple(cell)
    if grid.is_obstacle(cell):
        return -1.0
    if cell in covered:
        return 0.0
    return 1.0


def candidate_activity(nf: NeuralField, grid: GridMap, current: Sequence[int], candidate: Sequence[int]) -> float:
    """Activity of ``candidate`` excited from ``current``; stored into the field."""
    current, candidate = tuple(current), tuple(candidate)
    if len(candidate) != len(current) or max(abs(a - b) for a, b in zip(current, candidate)) != 1:
        raise PlanningError(f"{candidate!r} is not a neighbour of {current!r}")
    if not grid.in_bounds(candidate):
        raise PlanningError(f"{candidate!r} lies outside the map")
    x = (
        nf.activity(current)
        + math.exp(-euclidean_distance(candidate, nf.destination))
        + external_input(grid, nf.covered, candidate)
    )
    a = transfer(x, nf.k_g)
    nf.activities[candidate] = a
    return a


def select_next(nf: NeuralField, grid: GridMap, current: Sequence[int]) -> tuple[Cell, float]:
    """Most active neighbour of ``current`` and its activity.

    Raises
    ------
    Trapped
        If every neighbour is an obstacle.
    """
    best, best_a = None, -math.inf
    for nb in neighbors(grid, current):
        a = candidate_activity(nf, grid, current, nb)
        if a > best_a:
            best, best_a = nb, a
    if best is None or grid.is_obstacle(best):
        raise Trapped(f"no free neighbour around {tuple(current)!r}")
    return best, best_a


@dataclass(frozen=True)
class PlanPath:
    waypoints: tuple
    status: str

    @property
    def reached(self) -> bool:
        return self.status == REACHED

    @property
    def length(self) -> float:
        return sum(euclidean_distance(a, b) for a, b in zip(self.waypoints, self.waypoints[1:]))

    def step_counts(self) -> tuple[int, ...]:
        """Number of moves changing 1, 2 (and 3) coordinates at once."""
        dims = len(self.waypoints[0])
        counts = [0] * dims
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            counts[sum(x != y for x, y in zip(a, b)) - 1] += 1
        return tuple(counts)


def default_step_limit(grid: GridMap) -> int:
    return 4 * sum(grid.extent)


def plan_bnnp(
    grid: GridMap,
    origin: Sequence[int],
    destination: Sequence[int],
    k_g: float = DEFAULT_KG,
    step_limit: int | None = None,
) -> PlanPath:
    """Grow a waypoint chain from ``origin`` by repeated winner selection.

    Visited cells are marked covered. The run stops when the destination is
    reached, when no free neighbour exists or a cell would be entered a third
    time (``trapped``), or after ``step_limit`` moves (default
    ``4 * sum(extent)``).
    """
    _check_gain(k_g)
    origin, destination = tuple(origin), tuple(destination)
    for name, c in (("origin", origin), ("destination", destination)):
        if not grid.is_free(c):
            raise PlanningError(f"{name} {c!r} is out of bounds or an obstacle")
    if origin == destination:
        raise PlanningError("origin and destination coincide")
    if step_limit is None:
        step_limit = default_step_limit(grid)

    pad = (0,) * (3 - grid.dims)
    occ = grid.grid
    offsets = np.array([o + pad for o in neighbor_offsets(grid.dims)], dtype=np.int64)
    path = np.zeros((step_limit + 1, 3), dtype=np.int64)
    n, status = _kernels.greedy_plan(
        occ,
        np.array(origin + pad, dtype=np.int64),
        np.array(destination + pad, dtype=np.int64),
        offsets,
        float(k_g),
        int(step_limit),
        path,
        np.zeros(occ.shape),
        np.zeros(occ.shape, dtype=np.int64),
    )
    waypoints = tuple(tuple(int(v) for v in row[: grid.dims]) for row in path[:n])
    return PlanPath(waypoints, _STATUS[int(status)])
