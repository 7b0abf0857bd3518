import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uuvplan import _kernels
from uuvplan.gridworld import build_map, euclidean_distance, generate_random_obstacles, neighbor_offsets, neighbors
from uuvplan.neuroplanner import (
    REACHED,
    STEP_LIMIT,
    TRAPPED,
    NeuralField,
    PlanningError,
    Trapped,
    candidate_activity,
    default_step_limit,
    external_input,
    plan_bnnp,
    select_next,
    transfer,
)


def reference_plan(grid, origin, dest, k_g=0.5, limit=None):
    """Planner loop composed from the single-step operations."""
    limit = default_step_limit(grid) if limit is None else limit
    nf = NeuralField(grid, dest, k_g)
    nf.covered.add(origin)
    visits = {origin: 1}
    path, cur = [origin], origin
    while True:
        if cur == dest:
            return path, REACHED
        if len(path) - 1 >= limit:
            return path, STEP_LIMIT
        try:
            nxt, _ = select_next(nf, grid, cur)
        except Trapped:
            return path, TRAPPED
        visits[nxt] = visits.get(nxt, 0) + 1
        if visits[nxt] >= 3:
            return path, TRAPPED
        nf.covered.add(nxt)
        path.append(nxt)
        cur = nxt


@pytest.mark.parametrize("x, k_g, expected", [(-0.5, 0.5, -1.0), (-0.5, 1.0, -1.0), (0.0, 0.5, 0.0), (2.0, 0.5, 1.0)])
def test_transfer(x, k_g, expected):
    assert transfer(x, k_g) == expected


def test_external_input():
    g = build_map((5, 5), [(1, 1)])
    covered = {(2, 2)}
    assert external_input(g, covered, (1, 1)) == -1
    assert external_input(g, covered, (2, 2)) == 0
    assert external_input(g, covered, (3, 3)) == 1


def test_candidate_activity_examples():
    g = build_map((10, 10), [(1, 1)])
    nf = NeuralField(g, (9, 9), 0.5)
    # candidate is the destination: g(0 + e^0 + 1) = 1.0
    assert candidate_activity(nf, g, (8, 8), (9, 9)) == 1.0
    assert nf.activity((9, 9)) == 1.0
    # obstacle 8 away: 0 + e^-8 - 1 < 0
    nf2 = NeuralField(build_map((20, 20), [(9, 9)]), (9, 17), 0.5)
    assert candidate_activity(nf2, nf2.grid, (8, 8), (9, 9)) == -1.0
    # covered destination: g(0 + 1 + 0) = 0.5
    nf3 = NeuralField(build_map((10, 10)), (9, 9), 0.5)
    nf3.covered.add((9, 9))
    assert candidate_activity(nf3, nf3.grid, (8, 8), (9, 9)) == 0.5


def test_candidate_activity_uses_current_activity():
    g = build_map((10, 10))
    nf = NeuralField(g, (9, 9), 0.5)
    nf.activities[(4, 4)] = 0.8
    expected = 0.5 * (0.8 + math.exp(-math.sqrt(16 + 16)) + 1)
    assert candidate_activity(nf, g, (4, 4), (5, 5)) == pytest.approx(expected, rel=1e-15)


def test_candidate_must_be_neighbor():
    g = build_map((10, 10))
    nf = NeuralField(g, (9, 9))
    with pytest.raises(PlanningError):
        candidate_activity(nf, g, (2, 2), (4, 4))
    with pytest.raises(PlanningError):
        candidate_activity(nf, g, (2, 2), (2, 2))


def test_select_next_matches_nearest_neighbor_by_enumeration(empty2d):
    # all candidates are fresh (I=+1), so the winner minimises distance to (9, 9)
    cands = neighbors(empty2d, (2, 2))
    brute = min(cands, key=lambda c: (c[0] - 9) ** 2 + (c[1] - 9) ** 2)
    assert brute == (3, 3)
    nxt, a = select_next(NeuralField(empty2d, (9, 9)), empty2d, (2, 2))
    assert nxt == (3, 3)
    assert a == pytest.approx(0.5 * (math.exp(-math.sqrt(72)) + 1), rel=1e-15)


def test_select_next_adjacent_destination(empty2d):
    nxt, _ = select_next(NeuralField(empty2d, (9, 9)), empty2d, (8, 9))
    assert nxt == (9, 9)


def test_select_next_walled_in():
    walls = [c for c in neighbors(build_map((5, 5)), (2, 2))]
    g = build_map((5, 5), walls)
    with pytest.raises(Trapped):
        select_next(NeuralField(g, (4, 4)), g, (2, 2))


def test_select_next_tie_goes_to_first_offset():
    # (2,3) blocked: (1,3) and (3,3) score equally; (1,3) has the smaller offset
    g = build_map((5, 5), [(2, 3)])
    nxt, _ = select_next(NeuralField(g, (2, 4)), g, (2, 2))
    assert nxt == (1, 3)


def test_obstacle_never_selected_when_free_exists():
    g = build_map((5, 5), [(3, 3), (3, 2), (2, 3)])
    nxt, a = select_next(NeuralField(g, (4, 4)), g, (2, 2))
    assert not g.is_obstacle(nxt) and a >= 0


def test_plan_2d_default_length(empty2d):
    p = plan_bnnp(empty2d, (2, 1), (9, 9), 0.5)
    assert p.status == REACHED
    assert p.waypoints[0] == (2, 1) and p.waypoints[-1] == (9, 9)
    assert p.length == pytest.approx(7 * math.sqrt(2) + 1, abs=1e-12)
    assert round(p.length, 4) == 10.8995
    assert p.step_counts() == (1, 7)


def test_plan_3d_default_length(empty3d):
    p = plan_bnnp(empty3d, (2, 1, 1), (9, 9, 9), 0.5)
    assert p.status == REACHED
    assert p.length == pytest.approx(7 * math.sqrt(3) + math.sqrt(2), abs=1e-12)
    assert round(p.length, 4) == 13.5386
    assert p.step_counts() == (0, 1, 7)


def test_plan_adjacent(empty2d):
    assert plan_bnnp(empty2d, (8, 8), (9, 9)).waypoints == ((8, 8), (9, 9))


def test_plan_rejects_bad_endpoints():
    g = build_map((5, 5), [(4, 4)])
    with pytest.raises(PlanningError):
        plan_bnnp(g, (0, 0), (4, 4))
    with pytest.raises(PlanningError):
        plan_bnnp(g, (4, 4), (0, 0))
    with pytest.raises(PlanningError):
        plan_bnnp(g, (0, 0), (0, 0))
    with pytest.raises(PlanningError):
        plan_bnnp(g, (0, 0), (9, 0))
    with pytest.raises(PlanningError):
        plan_bnnp(g, (0, 0), (3, 3), k_g=0.0)


def test_plan_trapped_status():
    g = build_map((5, 5), neighbors(build_map((5, 5)), (0, 0)))
    p = plan_bnnp(g, (0, 0), (4, 4))
    assert p.status == TRAPPED and p.waypoints == ((0, 0),)


def test_plan_step_limit_status(empty2d):
    p = plan_bnnp(empty2d, (0, 0), (9, 9), step_limit=3)
    assert p.status == STEP_LIMIT and len(p.waypoints) == 4


def _check_path(grid, p):
    for a, b in zip(p.waypoints, p.waypoints[1:]):
        assert max(abs(x - y) for x, y in zip(a, b)) == 1
    assert not any(grid.is_obstacle(w) for w in p.waypoints)


@pytest.mark.parametrize("seed", range(60))
def test_kernel_matches_step_composition_2d(seed):
    g = generate_random_obstacles((10, 10), [0.1, 0.2, 0.3, 0.4][seed % 4], seed, [(2, 1), (9, 9)])
    p = plan_bnnp(g, (2, 1), (9, 9))
    path, status = reference_plan(g, (2, 1), (9, 9))
    assert list(p.waypoints) == path and p.status == status
    _check_path(g, p)


@pytest.mark.parametrize("seed", range(15))
def test_kernel_matches_step_composition_3d(seed):
    g = generate_random_obstacles((7, 7, 7), 0.3, seed, [(0, 1, 1), (6, 6, 5)])
    p = plan_bnnp(g, (0, 1, 1), (6, 6, 5), k_g=0.8)
    path, status = reference_plan(g, (0, 1, 1), (6, 6, 5), k_g=0.8)
    assert list(p.waypoints) == path and p.status == status
    _check_path(g, p)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 0.5), st.sampled_from([0.2, 0.5, 1.0]))
def test_obstacle_safety_and_range(seed, ratio, k_g):
    g = generate_random_obstacles((9, 9), ratio, seed, [(0, 0), (8, 8)])
    p = plan_bnnp(g, (0, 0), (8, 8), k_g)
    _check_path(g, p)
    # activity range over the kernel's store
    occ = g.grid
    act = np.zeros(occ.shape)
    path = np.zeros((default_step_limit(g) + 1, 3), dtype=np.int64)
    offsets = np.array([o + (0,) for o in neighbor_offsets(2)], dtype=np.int64)
    _kernels.greedy_plan(occ, np.array([0, 0, 0]), np.array([8, 8, 0]), offsets, k_g,
                         default_step_limit(g), path, act, np.zeros(occ.shape, dtype=np.int64))
    neg = act < 0
    assert np.all(act[neg] == -1.0)
    bound = 2 * k_g / (1 - k_g) if k_g < 1 else 2.0 * (default_step_limit(g) + 1)
    assert np.all(act[~neg] <= bound + 1e-12)
    assert np.all(np.isfinite(act))


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 20), st.integers(2, 20), st.data())
def test_progress_on_empty_map(nx, ny, data):
    g = build_map((nx, ny))
    o = (data.draw(st.integers(0, nx - 1)), data.draw(st.integers(0, ny - 1)))
    d = (data.draw(st.integers(0, nx - 1)), data.draw(st.integers(0, ny - 1)))
    if o == d:
        return
    p = plan_bnnp(g, o, d)
    assert p.status == REACHED
    dists = [euclidean_distance(w, d) for w in p.waypoints]
    assert all(b < a for a, b in zip(dists, dists[1:]))


def test_determinism():
    g = generate_random_obstacles((10, 10), 0.3, 5, [(2, 1), (9, 9)])
    assert plan_bnnp(g, (2, 1), (9, 9)) == plan_bnnp(g, (2, 1), (9, 9))
