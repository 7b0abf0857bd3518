"""Grid path planning for underwater vehicles with ocean-current compensation.

A bio-inspired neural field picks each next cell on an 8/26-connected grid
(BNNP); the compensated variant (CBNNP) subtracts the sensed current from the
desired velocity so the vehicle's resultant motion follows the planned path.
"""

from uuvplan.gridworld import (
    GridMap,
    MapError,
    build_map,
    euclidean_distance,
    generate_random_obstacles,
    load_map,
    neighbors,
    save_map,
)
from uuvplan.neuroplanner import (
    NeuralField,
    PlanPath,
    PlanningError,
    Trapped,
    candidate_activity,
    external_input,
    plan_bnnp,
    select_next,
    transfer,
)
from uuvplan.currentfield import CurrentSpec, sample
from uuvplan.guidance import (
    VelocityTriple,
    compensate,
    desired_velocity,
    feasibility_check,
    plan_cbnnp,
)
from uuvplan.kinematics import SimLimits, Trajectory, classify_cell, path_length, simulate
from uuvplan.oracle import OracleResult, shortest_path

__all__ = [
    "GridMap", "MapError", "build_map", "euclidean_distance", "generate_random_obstacles",
    "load_map", "neighbors", "save_map",
    "NeuralField", "PlanPath", "PlanningError", "Trapped", "candidate_activity",
    "external_input", "plan_bnnp", "select_next", "transfer",
    "CurrentSpec", "sample",
    "VelocityTriple", "compensate", "desired_velocity", "feasibility_check", "plan_cbnnp",
    "SimLimits", "Trajectory", "classify_cell", "path_length", "simulate",
    "OracleResult", "shortest_path",
]
