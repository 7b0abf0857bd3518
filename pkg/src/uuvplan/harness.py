"""Scenario runs, benchmark sweeps and result export.

A scenario is one (map, endpoints, current, variant) cell. Sweeps reproduce
the direction/speed tables on obstacle-free maps, the obstacle-ratio study on
seeded random maps, and the dynamic-current comparison. Tables hold either a
traveled length (4 d.p.) or the failure flags ``C``, ``F`` or ``C & F``.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from uuvplan.currentfield import CurrentSpec
from uuvplan.gridworld import GridMap, build_map, generate_random_obstacles, load_map
from uuvplan.guidance import plan_cbnnp
from uuvplan.kinematics import SimLimits, Trajectory, simulate
from uuvplan.neuroplanner import DEFAULT_KG
from uuvplan.oracle import shortest_path

SCHEMA_VERSION = 1
ALGORITHMS = ("cbnnp", "bnnp")

SPEEDS = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DIRECTIONS_2D = (0, 45, 90, 135, 180)
DIRECTIONS_3D = ((45, 0), (45, 45), (45, 90), (45, 135), (45, 180), (0, 45), (90, 45), (135, 45), (180, 45))
SPEED_DIRECTION_3D = (0, 45)
RATIOS = (0.2, 0.4, 0.6)
RATIO_DIRECTION = 135
STATIC_SPEED = 0.05
SWEEPS = ("directions2d", "speeds2d", "speeds3d", "directions3d", "ratio", "dynamic")


class ConfigError(ValueError):
    pass


def _default_endpoints(dims: int):
    return ((2, 1), (9, 9)) if dims == 2 else ((2, 1, 1), (9, 9, 9))


@dataclass(frozen=True)
class MapSource:
    extent: tuple = (10, 10)
    file: str | None = None
    ratio: float = 0.0
    seed: int = 0
    mode: str = "cells"

    @property
    def dims(self) -> int:
        return len(self.extent)


@dataclass(frozen=True)
class ScenarioConfig:
    map: MapSource = field(default_factory=MapSource)
    origin: tuple = (2, 1)
    destination: tuple = (9, 9)
    k_g: float = DEFAULT_KG
    desired_speed: float = 1.0
    current: CurrentSpec = field(default_factory=lambda: CurrentSpec.static2d(STATIC_SPEED, 0.0))
    variant: str = "both"
    sim: SimLimits = field(default_factory=SimLimits)
    output_dir: str | None = None
    name: str = "scenario"

    @property
    def variants(self) -> tuple:
        return ALGORITHMS if self.variant == "both" else (self.variant,)

    def limits(self) -> SimLimits:
        return replace(self.sim, speed=self.desired_speed)

    def build_map(self) -> GridMap:
        src = self.map
        if src.file is not None:
            return load_map(src.file)
        if src.ratio > 0:
            return generate_random_obstacles(src.extent, src.ratio, src.seed,
                                             [self.origin, self.destination], mode=src.mode)
        return build_map(src.extent)

    def validate(self) -> "ScenarioConfig":
        dims = self.map.dims
        if self.map.file is None and (dims not in (2, 3) or any(e <= 0 for e in self.map.extent)):
            raise ConfigError(f"map extent must be 2 or 3 positive integers, got {self.map.extent!r}")
        if len(self.origin) != dims or len(self.destination) != dims:
            raise ConfigError(f"origin/destination must have {dims} coordinates")
        if tuple(self.origin) == tuple(self.destination):
            raise ConfigError("origin and destination coincide")
        for name, c in (("origin", self.origin), ("destination", self.destination)):
            if self.map.file is None and not all(0 <= v < e for v, e in zip(c, self.map.extent)):
                raise ConfigError(f"{name} {tuple(c)!r} lies outside extent {self.map.extent!r}")
        if not 0.0 < self.k_g <= 1.0:
            raise ConfigError(f"k_g must lie in (0, 1], got {self.k_g}")
        if self.desired_speed <= 0:
            raise ConfigError(f"desired_speed must be positive, got {self.desired_speed}")
        if self.variant not in ALGORITHMS + ("both",):
            raise ConfigError(f"variant must be bnnp, cbnnp or both, got {self.variant!r}")
        if self.current.dims != dims:
            raise ConfigError(f"current kind {self.current.kind!r} does not fit a {dims}D map")
        if not 0.0 <= self.map.ratio <= 0.9:
            raise ConfigError(f"obstacle ratio must lie in [0, 0.9], got {self.map.ratio}")
        return self

    def to_dict(self) -> dict:
        d = {
            "version": SCHEMA_VERSION,
            "name": self.name,
            "map": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self.map).items()},
            "origin": list(self.origin),
            "destination": list(self.destination),
            "k_g": self.k_g,
            "desired_speed": self.desired_speed,
            "current": self.current.to_dict(),
            "variant": self.variant,
            "sim": {k: v for k, v in asdict(self.sim).items() if k != "speed"},
            "output_dir": self.output_dir,
        }
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        version = data.pop("version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported config version {version!r}")
        known = {"name", "map", "origin", "destination", "k_g", "desired_speed", "current",
                 "variant", "sim", "output_dir"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            mraw = dict(data.get("map", {}))
            if "random" in mraw:
                mraw.update(mraw.pop("random"))
            if "extent" in mraw:
                mraw["extent"] = tuple(int(e) for e in mraw["extent"])
            elif mraw.get("file"):
                mraw["extent"] = load_map(mraw["file"]).extent
            msrc = MapSource(**mraw)
            dims = msrc.dims
            o_def, d_def = _default_endpoints(dims)
            cur_raw = data.get("current")
            if cur_raw is None:
                current = CurrentSpec.static2d(STATIC_SPEED) if dims == 2 else CurrentSpec.static3d(STATIC_SPEED, 0, 45)
            else:
                current = CurrentSpec.from_dict(cur_raw)
            sim_raw = dict(data.get("sim", {}))
            sim_raw.pop("speed", None)
            cfg = cls(
                map=msrc,
                origin=tuple(int(v) for v in data.get("origin", o_def)),
                destination=tuple(int(v) for v in data.get("destination", d_def)),
                k_g=float(data.get("k_g", DEFAULT_KG)),
                desired_speed=float(data.get("desired_speed", 1.0)),
                current=current,
                variant=data.get("variant", "both"),
                sim=SimLimits(**sim_raw),
                output_dir=data.get("output_dir"),
                name=str(data.get("name", "scenario")),
            )
        except (TypeError, ValueError, KeyError, OSError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid config: {exc}") from exc
        return cfg.validate()


def load_config(path: str | Path) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ScenarioConfig.from_dict(data)


def default_config(dims: int = 2, current: CurrentSpec | None = None, **kw) -> ScenarioConfig:
    o, d = _default_endpoints(dims)
    if current is None:
        current = CurrentSpec.static2d(STATIC_SPEED) if dims == 2 else CurrentSpec.static3d(STATIC_SPEED, 0, 45)
    return ScenarioConfig(map=MapSource(extent=(10,) * dims), origin=o, destination=d,
                          current=current, **kw).validate()


@dataclass(frozen=True)
class RunRecord:
    scenario: str
    variant: str
    planned_length: float
    traveled_length: float
    reached: bool
    collision: bool
    fail: bool
    deviation_max: float
    end_reason: str
    wall_ms: float = 0.0

    @property
    def cell(self) -> str:
        """Table entry: length to 4 d.p. when reached cleanly, else the flags."""
        if self.reached:
            return f"{self.traveled_length:.4f}"
        return " & ".join(f for f, on in (("C", self.collision), ("F", self.fail)) if on)


RECORD_FIELDS = ("scenario", "variant", "planned_length", "traveled_length", "reached",
                 "collision", "fail", "deviation_max", "end_reason")


@dataclass
class ScenarioResult:
    records: list
    trajectories: dict  # variant -> Trajectory
    plan: object


def _record(name: str, variant: str, traj: Trajectory, planned: float, wall_ms: float) -> RunRecord:
    return RunRecord(
        scenario=name,
        variant=variant,
        planned_length=planned,
        traveled_length=traj.traveled_length,
        reached=traj.reached and not traj.collided,
        collision=traj.collided,
        fail=not traj.reached,
        deviation_max=traj.deviation_max,
        end_reason=traj.end_reason,
        wall_ms=wall_ms,
    )


def run_scenario(config: ScenarioConfig, grid: GridMap | None = None, write: bool = True) -> ScenarioResult:
    """Plan, simulate every requested variant and optionally write outputs."""
    config.validate()
    grid = grid if grid is not None else config.build_map()
    for name, c in (("origin", config.origin), ("destination", config.destination)):
        if not grid.is_free(c):
            raise ConfigError(f"{name} {tuple(c)!r} is out of bounds or an obstacle on the map")
    limits = config.limits()
    records, trajs = [], {}
    t0 = time.perf_counter()
    compensated = plan_cbnnp(grid, config.origin, config.destination, config.k_g,
                             config.current, config.desired_speed, limits.v_max)
    plan_ms = 1000 * (time.perf_counter() - t0)
    for variant in config.variants:
        t1 = time.perf_counter()
        traj = simulate(grid, compensated.path, variant, config.current, limits=limits,
                        destination=config.destination, k_g=config.k_g)
        wall = plan_ms + 1000 * (time.perf_counter() - t1)
        trajs[variant] = traj
        records.append(_record(config.name, variant, traj, compensated.path.length, wall))
    if write and config.output_dir:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for variant, traj in trajs.items():
            write_trajectory_csv(traj, out / f"{config.name}_{variant}_trajectory.csv")
        write_schedule_csv(compensated, out / f"{config.name}_velocity_schedule.csv")
        export(records, out / f"{config.name}_records.csv", "csv")
    return ScenarioResult(records, trajs, compensated)


@dataclass
class Table:
    """Algorithms x conditions grid of table entries."""

    title: str
    header: str
    columns: list
    rows: dict  # algorithm label -> list of entries
    records: list = field(default_factory=list)
    trajectories: dict = field(default_factory=dict)

    @property
    def shape(self) -> tuple:
        return (len(self.rows), len(self.columns))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.header] + [str(c) for c in self.columns])
        for name, cells in self.rows.items():
            w.writerow([name] + cells)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"title": self.title, "header": self.header, "columns": self.columns,
                           "rows": self.rows}, indent=2) + "\n"

    def __str__(self) -> str:
        grid = [[self.header] + [str(c) for c in self.columns]]
        grid += [[name] + list(cells) for name, cells in self.rows.items()]
        widths = [max(len(row[i]) for row in grid) for i in range(len(grid[0]))]
        lines = [self.title] + ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in grid]
        return "\n".join(lines)


def _sweep(title, header, columns, configs, limits_override=None) -> Table:
    rows = {alg: [] for alg in ALGORITHMS}
    records = []
    for cfg in configs:
        if limits_override is not None:
            cfg = replace(cfg, sim=limits_override)
        res = run_scenario(cfg, write=False)
        for rec in res.records:
            rows[rec.variant].append(rec.cell)
            records.append(rec)
    return Table(title, header, list(columns), {k.upper(): v for k, v in rows.items()}, records)


def sweep_directions_2d(limits: SimLimits | None = None) -> Table:
    cfgs = [replace(default_config(2, CurrentSpec.static2d(STATIC_SPEED, th)), name=f"dir2d_{th}")
            for th in DIRECTIONS_2D]
    return _sweep("2D, currents of different directions (deg)", "algorithm", DIRECTIONS_2D, cfgs, limits)


def sweep_speeds(dim: int = 2, limits: SimLimits | None = None) -> Table:
    if dim == 2:
        cfgs = [replace(default_config(2, CurrentSpec.static2d(s, 0)), name=f"speed2d_{s}") for s in SPEEDS]
    elif dim == 3:
        el, az = SPEED_DIRECTION_3D
        cfgs = [replace(default_config(3, CurrentSpec.static3d(s, el, az)), name=f"speed3d_{s}") for s in SPEEDS]
    else:
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    return _sweep(f"{dim}D, currents of different velocities (m/s)", "algorithm", SPEEDS, cfgs, limits)


def sweep_directions_3d(limits: SimLimits | None = None) -> Table:
    cfgs = [replace(default_config(3, CurrentSpec.static3d(STATIC_SPEED, el, az)), name=f"dir3d_{el}_{az}")
            for el, az in DIRECTIONS_3D]
    cols = [f"{el}/{az}" for el, az in DIRECTIONS_3D]
    return _sweep("3D, currents of different directions (deg to X-Y / deg to X-Z)", "algorithm", cols, cfgs, limits)


def sweep_obstacle_ratio(ratios: Sequence[float] = RATIOS, n_seeds: int = 50, seed: int = 0,
                         speed: float = STATIC_SPEED, direction: float = RATIO_DIRECTION,
                         limits: SimLimits | None = None) -> Table:
    """Seeded random maps per ratio; counts per variant.

    Columns: runs, reached, collisions, fails, cf_rate (share of runs with C
    or F), oracle_reachable (maps where a collision-free route exists).
    """
    cols = ["ratio", "runs", "reached", "collisions", "fails", "cf_rate", "oracle_reachable"]
    rows: dict = {}
    records = []
    base = default_config(2, CurrentSpec.static2d(speed, direction))
    if limits is not None:
        base = replace(base, sim=limits)
    for ratio in ratios:
        stats = {alg: [0, 0, 0, 0] for alg in ALGORITHMS}  # reached, C, F, C or F
        reachable = 0
        for i in range(n_seeds):
            map_seed = seed + i
            cfg = replace(base, map=replace(base.map, ratio=ratio, seed=map_seed),
                          name=f"ratio{ratio}_seed{map_seed}")
            grid = cfg.build_map()
            reachable += shortest_path(grid, cfg.origin, cfg.destination).reachable
            for rec in run_scenario(cfg, grid=grid, write=False).records:
                s = stats[rec.variant]
                s[0] += rec.reached
                s[1] += rec.collision
                s[2] += rec.fail
                s[3] += rec.collision or rec.fail
                records.append(rec)
        for alg in ALGORITHMS:
            r, c, f, cf = stats[alg]
            rows[f"{alg.upper()}@{ratio}"] = [f"{ratio}", str(n_seeds), str(r), str(c), str(f),
                                              f"{cf / n_seeds:.4f}", str(reachable)]
    return Table(f"2D obstacle ratio sweep ({n_seeds} seeds, {speed} m/s at {direction} deg)",
                 "algorithm", cols, rows, records)


def ratio_rates(table: Table) -> dict:
    """{variant: [(ratio, collisions, cf_rate), ...]} from a ratio-sweep table."""
    out: dict = {}
    for key, cells in table.rows.items():
        alg = key.split("@")[0].lower()
        out.setdefault(alg, []).append((float(cells[0]), int(cells[3]), float(cells[5])))
    return out


def dynamic_current_demo(current: CurrentSpec | None = None, out_dir: str | Path | None = None,
                         limits: SimLimits | None = None) -> Table:
    """Both variants under a time-varying current; writes trajectories when ``out_dir`` is set."""
    current = current or CurrentSpec.dynamic2d()
    cfg = replace(default_config(2, current), name="dynamic", output_dir=str(out_dir) if out_dir else None)
    if limits is not None:
        cfg = replace(cfg, sim=limits)
    res = run_scenario(cfg, write=out_dir is not None)
    cols = ["result", "traveled_length", "deviation_max"]
    rows = {}
    for rec in res.records:
        rows[rec.variant.upper()] = [rec.cell or "reached", f"{rec.traveled_length:.4f}", f"{rec.deviation_max:.4f}"]
    return Table("2D dynamic current", "algorithm", cols, rows, res.records, res.trajectories)


def run_sweep(name: str, out_dir: str | Path | None = None, fmt: str = "csv", n_seeds: int = 50,
              seed: int = 0, limits: SimLimits | None = None) -> Table:
    if name == "directions2d":
        table = sweep_directions_2d(limits)
    elif name == "speeds2d":
        table = sweep_speeds(2, limits)
    elif name == "speeds3d":
        table = sweep_speeds(3, limits)
    elif name == "directions3d":
        table = sweep_directions_3d(limits)
    elif name == "ratio":
        table = sweep_obstacle_ratio(n_seeds=n_seeds, seed=seed, limits=limits)
    elif name == "dynamic":
        table = dynamic_current_demo(out_dir=out_dir, limits=limits)
    else:
        raise ValueError(f"unknown sweep {name!r}; expected one of {SWEEPS}")
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_table(table, out / f"{name}_table.{fmt}", fmt)
        export(table.records, out / f"{name}_records.{fmt}", fmt)
    return table


# --- export -----------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def export(records: Sequence[RunRecord], path: str | Path, fmt: str = "csv") -> Path:
    """Write run records (full precision, stable column order; no wall-clock in CSV)."""
    path = Path(path)
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(RECORD_FIELDS)
                for r in records:
                    w.writerow([_fmt(getattr(r, f)) for f in RECORD_FIELDS])
        else:
            path.write_text(json.dumps([asdict(r) for r in records], indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def write_table(table: Table, path: str | Path, fmt: str = "csv") -> Path:
    path = Path(path)
    path.write_text(table.to_csv() if fmt == "csv" else table.to_json())
    return path


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> Path:
    dims = traj.positions.shape[1]
    axes = "xyz"[:dims]
    cells = traj.cells
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time"] + list(axes) + [f"cell_{a}" for a in axes] + ["variant"])
        for t, p, c in zip(traj.times, traj.positions, cells):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in p] + [int(v) for v in c] + [traj.variant])
    return path


def write_schedule_csv(plan, path: str | Path) -> Path:
    dims = len(plan.waypoints[0])
    axes = "xyz"[:dims]
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"{v}_{a}" for v in ("v_d", "v_cur", "v_plan") for a in axes])
        for tr in plan.schedule:
            w.writerow([repr(float(tr.t))] + [repr(float(x)) for x in np.concatenate([tr.v_d, tr.v_cur, tr.v_plan])])
    return path
