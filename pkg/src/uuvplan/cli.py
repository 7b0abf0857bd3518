"""Command line entry point: ``uuvplan {plan,simulate,sweep,oracle,validate-config}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from uuvplan.harness import (
    SWEEPS,
    ConfigError,
    MapSource,
    ScenarioConfig,
    default_config,
    export,
    load_config,
    run_scenario,
    run_sweep,
    write_table,
)
from uuvplan.kinematics import SimLimits
from uuvplan.neuroplanner import plan_bnnp
from uuvplan.oracle import shortest_path


def _add_common(p: argparse.ArgumentParser, sweep: bool = False) -> None:
    p.add_argument("--config", help="scenario config file (JSON)")
    p.add_argument("--seed", type=int, help="random map seed")
    p.add_argument("--out-dir", help="directory for output files")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--dt", type=float, help="integration step (s)")
    if not sweep:
        p.add_argument("--variant", choices=("bnnp", "cbnnp", "both"))
        p.add_argument("--ratio", type=float, help="random obstacle ratio")
        p.add_argument("--dims", type=int, choices=(2, 3), default=2, help="dimension when no config is given")


def _scenario(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else default_config(args.dims)
    updates = {}
    if getattr(args, "variant", None):
        updates["variant"] = args.variant
    if args.out_dir:
        updates["output_dir"] = args.out_dir
    if args.dt is not None:
        updates["sim"] = replace(cfg.sim, dt=args.dt)
    m = cfg.map
    if getattr(args, "ratio", None) is not None:
        m = replace(m, ratio=args.ratio)
    if args.seed is not None:
        m = replace(m, seed=args.seed)
    if m != cfg.map:
        updates["map"] = m
    return replace(cfg, **updates).validate() if updates else cfg


def cmd_plan(args) -> int:
    cfg = _scenario(args)
    grid = cfg.build_map()
    plan = plan_bnnp(grid, cfg.origin, cfg.destination, cfg.k_g)
    print(f"status: {plan.status}")
    print("waypoints: " + " ".join(str(w) for w in plan.waypoints))
    print(f"length: {plan.length:.4f}")
    return 0


def cmd_oracle(args) -> int:
    cfg = _scenario(args)
    grid = cfg.build_map()
    res = shortest_path(grid, cfg.origin, cfg.destination)
    if not res.reachable:
        print("unreachable")
        return 0
    print("waypoints: " + " ".join(str(w) for w in res.path))
    print(f"length: {res.length:.4f}")
    return 0


def cmd_simulate(args) -> int:
    cfg = _scenario(args)
    if cfg.output_dir is None:
        cfg = replace(cfg, output_dir="out")
    res = run_scenario(cfg)
    if args.format == "json":
        export(res.records, Path(cfg.output_dir) / f"{cfg.name}_records.json", "json")
    for r in res.records:
        print(f"{r.variant}: {r.cell or 'reached'} traveled={r.traveled_length:.4f} "
              f"deviation_max={r.deviation_max:.3g} ({r.end_reason})")
    print(f"wrote outputs to {cfg.output_dir}")
    return 0


def cmd_sweep(args) -> int:
    limits = SimLimits(dt=args.dt) if args.dt is not None else None
    if args.config:
        cfg = load_config(args.config)
        limits = replace(cfg.sim, dt=args.dt) if args.dt is not None else cfg.sim
    table = run_sweep(args.name, out_dir=args.out_dir, fmt=args.format, n_seeds=args.seeds,
                      seed=args.seed or 0, limits=limits)
    print(table)
    return 0


def cmd_validate(args) -> int:
    if not args.config:
        raise ConfigError("--config is required")
    cfg = load_config(args.config)
    print(json.dumps(cfg.to_dict(), indent=2))
    print("config ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uuvplan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan one path and print waypoints and length")
    _add_common(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="run one scenario and write trajectory CSVs")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a named experiment sweep")
    p.add_argument("name", choices=SWEEPS)
    p.add_argument("--seeds", type=int, default=50, help="maps per ratio (ratio sweep)")
    _add_common(p, sweep=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="reference shortest path (Dijkstra)")
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate-config", help="check a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
