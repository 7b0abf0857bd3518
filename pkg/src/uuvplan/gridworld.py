"""Occupancy grids of unit cells in 2D or 3D.

Cells are addressed by integer coordinate tuples. Cell ``c`` is the unit
square (cube) centred on ``c``, so a continuous position ``p`` lies in cell
``floor(p + 0.5)``. Every cell is either free or an obstacle.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Cell = tuple[int, ...]


class MapError(ValueError):
    """Invalid map construction or generation request."""


@dataclass(frozen=True)
class GridMap:
    """Immutable binary occupancy grid.

    Attributes
    ----------
    extent : tuple of int
        Number of cells along each axis.
    occupancy : frozenset of Cell
        Obstacle cells.
    """

    extent: tuple[int, ...]
    occupancy: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if len(self.extent) not in (2, 3):
            raise MapError(f"extent must have 2 or 3 axes, got {self.extent!r}")
        if any(int(e) != e or e <= 0 for e in self.extent):
            raise MapError(f"extent must be positive integers, got {self.extent!r}")
        for c in self.occupancy:
            if len(c) != self.dims:
                raise MapError(f"obstacle {c!r} has arity {len(c)}, map has {self.dims} axes")
            if not self.in_bounds(c):
                raise MapError(f"obstacle {c!r} lies outside extent {self.extent!r}")

    @property
    def dims(self) -> int:
        return len(self.extent)

    @property
    def n_cells(self) -> int:
        return math.prod(self.extent)

    def in_bounds(self, cell: Sequence[int]) -> bool:
        return len(cell) == self.dims and all(0 <= c < e for c, e in zip(cell, self.extent))

    def is_obstacle(self, cell: Sequence[int]) -> bool:
        return tuple(cell) in self.occupancy

    def is_free(self, cell: Sequence[int]) -> bool:
        return self.in_bounds(cell) and tuple(cell) not in self.occupancy

    @property
    def obstacle_ratio(self) -> float:
        return len(self.occupancy) / self.n_cells

    @cached_property
    def grid(self) -> np.ndarray:
        """Occupancy as a uint8 array, always 3D (a 2D map gets a unit z axis)."""
        shape = tuple(self.extent) + (1,) * (3 - self.dims)
        arr = np.zeros(shape, dtype=np.uint8)
        for c in self.occupancy:
            arr[tuple(c) + (0,) * (3 - self.dims)] = 1
        arr.setflags(write=False)
        return arr

    def to_dict(self) -> dict:
        return {
            "dims": self.dims,
            "extent": list(self.extent),
            "obstacles": [list(c) for c in sorted(self.occupancy)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GridMap":
        extent = tuple(int(e) for e in data["extent"])
        dims = int(data.get("dims", len(extent)))
        if dims != len(extent):
            raise MapError(f"dims={dims} does not match extent {extent!r}")
        return build_map(extent, [tuple(int(v) for v in c) for c in data.get("obstacles", [])])


def build_map(extent: Sequence[int], obstacle_list: Iterable[Sequence[int]] = ()) -> GridMap:
    """Build a map with exactly the listed cells marked as obstacles."""
    return GridMap(tuple(int(e) for e in extent), frozenset(tuple(int(v) for v in c) for c in obstacle_list))


def neighbor_offsets(dims: int) -> list[Cell]:
    """Chebyshev-1 offsets in lexicographic order (8 in 2D, 26 in 3D)."""
    return [o for o in itertools.product((-1, 0, 1), repeat=dims) if any(o)]


def neighbors(grid: GridMap, cell: Sequence[int]) -> list[Cell]:
    """In-bounds cells at Chebyshev distance 1, in lexicographic offset order.

    Obstacle cells are included; out-of-map positions are simply absent.
    """
    cell = tuple(cell)
    if not grid.in_bounds(cell):
        raise MapError(f"cell {cell!r} lies outside extent {grid.extent!r}")
    out = []
    for off in neighbor_offsets(grid.dims):
        nb = tuple(c + o for c, o in zip(cell, off))
        if grid.in_bounds(nb):
            out.append(nb)
    return out


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Straight-line distance in metres (cell side is 1 m)."""
    if len(a) != len(b):
        raise ValueError(f"arity mismatch: {tuple(a)!r} vs {tuple(b)!r}")
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def _protected_region(grid_extent: Sequence[int], cells: Iterable[Sequence[int]]) -> set[Cell]:
    probe = GridMap(tuple(grid_extent))
    region: set[Cell] = set()
    for c in cells:
        c = tuple(c)
        if not probe.in_bounds(c):
            raise MapError(f"protected cell {c!r} lies outside extent {tuple(grid_extent)!r}")
        region.add(c)
        region.update(neighbors(probe, c))
    return region


def generate_random_obstacles(
    extent: Sequence[int],
    ratio: float,
    seed: int,
    protected_cells: Iterable[Sequence[int]] = (),
    mode: str = "cells",
    max_block: int = 3,
) -> GridMap:
    """Seeded random map with ``round(ratio * n_cells)`` obstacle cells.

    ``mode="cells"`` samples single cells uniformly without replacement;
    ``mode="blocks"`` drops axis-aligned boxes with sides in ``[1, max_block]``
    until the target count is met (the last box is truncated). Protected
    cells and their Chebyshev-1 neighbourhoods are never occupied.
    """
    extent = tuple(int(e) for e in extent)
    if not 0.0 <= ratio <= 0.9:
        raise MapError(f"ratio must lie in [0, 0.9], got {ratio}")
    probe = GridMap(extent)
    keep_free = _protected_region(extent, protected_cells)
    target = int(round(ratio * probe.n_cells))
    eligible = [c for c in itertools.product(*(range(e) for e in extent)) if c not in keep_free]
    if target > len(eligible):
        raise MapError(
            f"ratio {ratio} needs {target} obstacle cells but only {len(eligible)} lie "
            "outside the protected start/goal neighbourhoods"
        )
    rng = np.random.default_rng(seed)
    if mode == "cells":
        picks = rng.choice(len(eligible), size=target, replace=False) if target else []
        return build_map(extent, (eligible[i] for i in sorted(picks)))
    if mode != "blocks":
        raise MapError(f"unknown obstacle mode {mode!r}")

    chosen: list[Cell] = []
    taken: set[Cell] = set()
    attempts = 0
    while len(chosen) < target:
        attempts += 1
        if attempts > 100 * probe.n_cells:
            raise MapError(f"could not place {target} block obstacles")
        corner = [int(rng.integers(0, e)) for e in extent]
        sides = [int(rng.integers(1, max_block + 1)) for _ in extent]
        box = itertools.product(*(range(c, min(c + s, e)) for c, s, e in zip(corner, sides, extent)))
        for c in box:
            if c in keep_free or c in taken:
                continue
            taken.add(c)
            chosen.append(c)
            if len(chosen) == target:
                break
    return build_map(extent, chosen)


def save_map(grid: GridMap, path: str | Path) -> None:
    Path(path).write_text(json.dumps(grid.to_dict(), indent=2) + "\n")


def load_map(path: str | Path) -> GridMap:
    return GridMap.from_dict(json.loads(Path(path).read_text()))
