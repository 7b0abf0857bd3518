"""Numeric inner loops: greedy neural-field planning and leg integration.

Everything here takes plain arrays so it compiles under numba's nopython
mode. Maps are 3D uint8 arrays (2D maps carry a unit z axis) and positions
are length-3 float vectors (z = 0 in 2D).
"""

import math

import numpy as np

from uuvplan._accel import jit

# plan status codes
PLAN_REACHED = 0
PLAN_TRAPPED = 1
PLAN_STEP_LIMIT = 2

# integration events
EV_LEG_DONE = 0
EV_CAPTURED = 1
EV_CELL_CHANGED = 2
EV_OUT_OF_BOUNDS = 3
EV_TIMEOUT = 4
EV_COLLISION = 5
EV_BUFFER_FULL = 6
_EV_NONE = -1

# current parameter vector layout
CUR_KIND, CUR_VX, CUR_VY, CUR_VZ = 0, 1, 2, 3
CUR_THETA0, CUR_THETA_AMP, CUR_THETA_PERIOD = 4, 5, 6
CUR_SPEED0, CUR_SPEED_AMP, CUR_SPEED_PERIOD = 7, 8, 9
CUR_STATIC = 0.0
CUR_DYNAMIC = 1.0

# penetration depth below which touching an obstacle face is not a collision
CONTACT_TOL = 1e-9


@jit
def transfer_fn(x, k_g):
    if x < 0.0:
        return -1.0
    return k_g * x


@jit
def greedy_plan(occ, origin, dest, offsets, k_g, step_limit, path, act, visits):
    """Walk the neural field from ``origin`` toward ``dest``.

    ``path`` (N x 3 int), ``act`` (float, occ.shape) and ``visits`` (int,
    occ.shape) are caller-owned and must be zeroed. Returns (n_waypoints,
    status).
    """
    nx, ny, nz = occ.shape
    cx, cy, cz = origin[0], origin[1], origin[2]
    dx, dy, dz = dest[0], dest[1], dest[2]
    path[0, 0] = cx
    path[0, 1] = cy
    path[0, 2] = cz
    n = 1
    visits[cx, cy, cz] = 1
    a_cur = act[cx, cy, cz]
    steps = 0
    while True:
        if cx == dx and cy == dy and cz == dz:
            return n, PLAN_REACHED
        if steps >= step_limit:
            return n, PLAN_STEP_LIMIT
        best = -np.inf
        bx, by, bz = -1, -1, -1
        for k in range(offsets.shape[0]):
            x = cx + offsets[k, 0]
            y = cy + offsets[k, 1]
            z = cz + offsets[k, 2]
            if x < 0 or y < 0 or z < 0 or x >= nx or y >= ny or z >= nz:
                continue
            if occ[x, y, z] != 0:
                ext = -1.0
            elif visits[x, y, z] > 0:
                ext = 0.0
            else:
                ext = 1.0
            d = math.sqrt(float((x - dx) ** 2 + (y - dy) ** 2 + (z - dz) ** 2))
            a = transfer_fn(a_cur + math.exp(-d) + ext, k_g)
            act[x, y, z] = a
            if a > best:
                best = a
                bx, by, bz = x, y, z
        if bx < 0 or occ[bx, by, bz] != 0:
            return n, PLAN_TRAPPED
        visits[bx, by, bz] += 1
        if visits[bx, by, bz] >= 3:
            return n, PLAN_TRAPPED
        cx, cy, cz = bx, by, bz
        a_cur = act[cx, cy, cz]
        path[n, 0] = cx
        path[n, 1] = cy
        path[n, 2] = cz
        n += 1
        steps += 1


@jit
def current_velocity(cur, t, out):
    """Write the current velocity at time ``t`` into ``out`` (length 3)."""
    if cur[CUR_KIND] == CUR_STATIC:
        out[0] = cur[CUR_VX]
        out[1] = cur[CUR_VY]
        out[2] = cur[CUR_VZ]
        return
    theta = cur[CUR_THETA0]
    if cur[CUR_THETA_PERIOD] > 0.0:
        theta += cur[CUR_THETA_AMP] * math.sin(2.0 * math.pi * t / cur[CUR_THETA_PERIOD])
    speed = cur[CUR_SPEED0]
    if cur[CUR_SPEED_PERIOD] > 0.0:
        speed += cur[CUR_SPEED_AMP] * math.sin(2.0 * math.pi * t / cur[CUR_SPEED_PERIOD])
    if speed < 0.0:
        speed = 0.0
    out[0] = speed * math.cos(theta)
    out[1] = speed * math.sin(theta)
    out[2] = 0.0


@jit
def nearest_cell(pos, out):
    for i in range(3):
        out[i] = int(math.floor(pos[i] + 0.5))


@jit
def obstacle_depth(pos, occ):
    """Penetration depth of ``pos`` into an obstacle cell, or -1.

    Returns -2 when ``pos`` lies outside the map.
    """
    x = int(math.floor(pos[0] + 0.5))
    y = int(math.floor(pos[1] + 0.5))
    z = int(math.floor(pos[2] + 0.5))
    if x < 0 or y < 0 or z < 0 or x >= occ.shape[0] or y >= occ.shape[1] or z >= occ.shape[2]:
        return -2.0
    if occ[x, y, z] == 0:
        return -1.0
    depth = 0.5 - abs(pos[0] - x)
    depth = min(depth, 0.5 - abs(pos[1] - y))
    depth = min(depth, 0.5 - abs(pos[2] - z))
    return depth


@jit
def integrate_leg(pos, t, leg_start, leg_dir, leg_len, speed, homing, compensated,
                  dest, capture_radius, dt, t_limit, occ, cur,
                  buf_t, buf_pos, buf_cmd, n, stop_on_collision):
    """Advance the vehicle until the next event.

    Leg mode commands ``speed * leg_dir`` until the along-track progress from
    ``leg_start`` reaches ``leg_len``. Homing mode re-aims at ``dest`` every
    step (midpoint rule) until inside ``capture_radius``. When ``compensated``
    the command is ``v_d - v_cur`` so the resultant equals ``v_d``.

    Steps are shortened to land exactly on leg ends, the capture sphere, the
    map boundary and the time limit. ``pos`` is updated in place; samples are
    appended to the buffers from index ``n``. Returns (event, t, n, collided).
    """
    hi0 = occ.shape[0] - 0.5
    hi1 = occ.shape[1] - 0.5
    hi2 = occ.shape[2] - 0.5
    vc = np.empty(3)
    vd = np.empty(3)
    cmd = np.empty(3)
    vel = np.empty(3)
    aim = np.empty(3)
    dcell = np.empty(3, dtype=np.int64)
    nearest_cell(dest, dcell)
    collided = False
    r2 = capture_radius * capture_radius

    while True:
        if n >= buf_t.shape[0]:
            return EV_BUFFER_FULL, t, n, collided
        if t >= t_limit:
            return EV_TIMEOUT, t, n, collided

        current_velocity(cur, t + 0.5 * dt, vc)
        if homing:
            for i in range(3):
                aim[i] = dest[i] - pos[i]
            dist = math.sqrt(aim[0] ** 2 + aim[1] ** 2 + aim[2] ** 2)
            if dist * dist <= r2:
                return EV_CAPTURED, t, n, collided
            for i in range(3):
                aim[i] = dest[i] - (pos[i] + 0.5 * dt * (speed * aim[i] / dist + vc[i]))
            dmid = math.sqrt(aim[0] ** 2 + aim[1] ** 2 + aim[2] ** 2)
            if dmid > 0.0:
                for i in range(3):
                    vd[i] = speed * aim[i] / dmid
            else:
                for i in range(3):
                    vd[i] = speed * (dest[i] - pos[i]) / dist
        else:
            for i in range(3):
                vd[i] = speed * leg_dir[i]
        for i in range(3):
            if compensated:
                cmd[i] = vd[i] - vc[i]
            else:
                cmd[i] = vd[i]
            vel[i] = cmd[i] + vc[i]

        h = dt
        event = _EV_NONE
        if t_limit - t <= h:
            h = t_limit - t
            event = EV_TIMEOUT
        if not homing:
            s_rem = leg_len
            for i in range(3):
                s_rem -= (pos[i] - leg_start[i]) * leg_dir[i]
            if s_rem <= 0.0:
                return EV_LEG_DONE, t, n, collided
            w = vel[0] * leg_dir[0] + vel[1] * leg_dir[1] + vel[2] * leg_dir[2]
            if w > 0.0 and s_rem <= w * h:
                h = s_rem / w
                event = EV_LEG_DONE
        else:
            a = vel[0] ** 2 + vel[1] ** 2 + vel[2] ** 2
            b = 0.0
            c = -r2
            for i in range(3):
                rel = pos[i] - dest[i]
                b += 2.0 * rel * vel[i]
                c += rel * rel
            disc = b * b - 4.0 * a * c
            if a > 0.0 and disc >= 0.0:
                s = (-b - math.sqrt(disc)) / (2.0 * a)
                if 0.0 <= s <= h:
                    h = s
                    event = EV_CAPTURED
        for i in range(3):
            if i == 0:
                hi = hi0
            elif i == 1:
                hi = hi1
            else:
                hi = hi2
            if vel[i] > 0.0:
                s = (hi - pos[i]) / vel[i]
            elif vel[i] < 0.0:
                s = (-0.5 - pos[i]) / vel[i]
            else:
                continue
            if s <= h:
                h = max(s, 0.0)
                event = EV_OUT_OF_BOUNDS

        t_new = t + h
        if t_new <= t:
            # step too small to advance the clock: resolve the event in place
            if event == _EV_NONE:
                event = EV_TIMEOUT
            return event, t, n, collided
        for i in range(3):
            pos[i] += vel[i] * h
        t = t_new
        buf_t[n] = t
        for i in range(3):
            buf_pos[n, i] = pos[i]
            buf_cmd[n, i] = cmd[i]
        n += 1

        if event == EV_OUT_OF_BOUNDS:
            return event, t, n, collided
        if obstacle_depth(pos, occ) > CONTACT_TOL:
            collided = True
            if stop_on_collision:
                return EV_COLLISION, t, n, collided
        if event != _EV_NONE:
            return event, t, n, collided
        if homing:
            for i in range(3):
                if int(math.floor(pos[i] + 0.5)) != dcell[i]:
                    return EV_CELL_CHANGED, t, n, collided
