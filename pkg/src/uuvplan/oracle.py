"""Exact grid shortest paths for checking the planner.

Plain Dijkstra over the 8/26-connected grid graph with Euclidean edge weights
(1, sqrt 2, sqrt 3). Diagonal moves may cut past obstacle corners, matching
the planner's neighbour rule. Deliberately shares no code with the planner
kernels.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from uuvplan.gridworld import GridMap

_EPS = 1e-12


@dataclass(frozen=True)
class OracleResult:
    length: float  # math.inf when unreachable
    path: tuple

    @property
    def reachable(self) -> bool:
        return math.isfinite(self.length)


def shortest_path(grid: GridMap, origin: Sequence[int], destination: Sequence[int]) -> OracleResult:
    origin, destination = tuple(origin), tuple(destination)
    for c in (origin, destination):
        if not grid.is_free(c):
            raise ValueError(f"endpoint {c!r} is out of bounds or an obstacle")
    moves = [
        (off, math.sqrt(sum(o * o for o in off)))
        for off in itertools.product((-1, 0, 1), repeat=grid.dims)
        if any(off)
    ]
    dist = {origin: 0.0}
    pred: dict = {}
    done = set()
    heap = [(0.0, origin)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == destination:
            break
        for off, w in moves:
            v = tuple(a + b for a, b in zip(u, off))
            if v in done or not grid.is_free(v):
                continue
            nd = d + w
            old = dist.get(v, math.inf)
            if nd < old - _EPS or (abs(nd - old) <= _EPS and u < pred[v]):
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    if destination not in done:
        return OracleResult(math.inf, ())
    path = [destination]
    while path[-1] != origin:
        path.append(pred[path[-1]])
    return OracleResult(dist[destination], tuple(reversed(path)))
