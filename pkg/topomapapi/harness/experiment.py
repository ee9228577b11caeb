"""Experiment runs: explore once, build every requested map mode from the same
run, then relocalization trials and planning pairs per mode.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..exploration.explorer import ExploreResult, explore
from ..fht.builder import FanOut, MapBuilder
from ..fht.codec import serialize, storage_bytes
from ..fht.graph import FhtMap
from ..planning.executor import execute_with_skip
from ..planning.planner import plan
from ..relocalization.relocalizer import relocalize
from ..relocalization.walk import random_cell, random_offset, random_start, random_walk
from ..world.geometry import Pose2, Transform2
from ..world.grid import OccupancyGrid
from ..world.mapping import traversable_mask
from ..world.worldfile import World, load_world_file, save_grid
from .config import ExperimentConfig
from .metrics import (MetricsReport, dense_bytes, encode_rle, grid_baseline_length, is_relative,
                      json_safe, metric_c_path, metric_reloc_errors, metric_success,
                      rle_bytes)
from .render import export_render

logger = logging.getLogger(__name__)

PLAN_SEED_OFFSET = 1000


@dataclass
class RunReport:
    world: str
    seed: int
    config: dict
    exploration: dict
    grid_baselines: dict
    modes: dict = field(default_factory=dict)
    explored: Optional[OccupancyGrid] = field(default=None, repr=False)

    @property
    def failed_trials(self) -> int:
        return sum(report.failed for report in self.modes.values())

    def as_dict(self) -> dict:
        return json_safe({
            "world": self.world,
            "seed": self.seed,
            "config": self.config,
            "exploration": self.exploration,
            "grid_baselines": self.grid_baselines,
            "modes": {mode: report.as_dict() for mode, report in self.modes.items()},
            "failed_trials": self.failed_trials,
        })

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def default_start(world: World, config: ExperimentConfig) -> Pose2:
    if config.start is not None:
        return Pose2(config.start[0], config.start[1], 0.0)
    clearance = world.resolution if config.clearance is None else config.clearance
    rows, cols = np.nonzero(traversable_mask(world.truth, clearance))
    if rows.size == 0:
        raise ValueError(f"world {world.name} has no traversable cell")
    return Pose2(*world.truth.center_of(int(rows[0]), int(cols[0])), 0.0)


def build_maps(world: World, config: ExperimentConfig, modes) -> tuple[ExploreResult, dict]:
    """One exploration run feeding a builder per mode"""
    descriptor = config.descriptor()
    builders = {
        mode: MapBuilder(world, mode, config.builder_state(), rho=config.rho,
                         clearance=config.clearance, max_half_extent=config.max_half_extent,
                         descriptor=descriptor, n_beams=config.n_beams,
                         max_range=config.max_range)
        for mode in modes
    }
    result = explore(world, default_start(world, config), config.explore_config(),
                     FanOut(*builders.values()))
    return result, {mode: builder.finish(result.explored) for mode, builder in builders.items()}


def reloc_trial(fht_map: FhtMap, world: World, config: ExperimentConfig, mode: str,
                trial: int) -> dict:
    rng = np.random.default_rng([config.seed, trial])
    offset = random_offset(rng, config.offset_extent)
    start = random_start(world, rng, config.clearance)
    walk = random_walk(world, start, config.walk_length, rng, config.step, config.clearance)
    result = relocalize(fht_map, world, offset, walk, config.reloc_config(mode),
                        config.descriptor())
    eps_t, eps_theta = metric_reloc_errors(result.t_final, offset)
    return {
        "trial": trial,
        "failed": False,
        "converged": result.converged,
        "success": result.converged and metric_success(result.t_final, offset),
        "eps_t": eps_t,
        "eps_t_relative": is_relative(offset),
        "eps_theta": eps_theta,
        "l_reloca": result.trail_length,
        "n_used": result.n_used,
        "icp_runs": result.icp_runs,
        "t_gt": {"x": offset.x, "y": offset.y, "theta": offset.theta},
        "t_final": result.as_dict()["t_final"],
    }


def plan_trial(fht_map: FhtMap, world: World, explored, config: ExperimentConfig,
               pair: int) -> dict:
    rng = np.random.default_rng([config.seed, PLAN_SEED_OFFSET + pair])
    clearance = world.resolution if config.clearance is None else config.clearance
    n_s = random_cell(explored, rng, clearance)
    n_d = random_cell(explored, rng, clearance)
    row = {"pair": pair, "failed": False, "n_s": list(n_s), "n_d": list(n_d)}
    s_grid = grid_baseline_length(explored, n_s, n_d)
    if s_grid is None or s_grid <= 0:
        logger.warning("pair %d discarded: no grid path between start and goal", pair)
        row.update({"discarded": True, "c_path": None})
        return row
    route = plan(fht_map, Transform2.identity(), n_s, n_d, config.k)
    execution = execute_with_skip(world, route, explored, config.clearance, config.step)
    row.update({
        "start_node": route.start_node,
        "end_node": route.end_node,
        "topo_length": route.topo_length,
        "s_topo": execution.traveled,
        "s_grid": s_grid,
        "reached": execution.reached,
        "c_path": metric_c_path(execution.traveled, s_grid) if execution.reached else None,
    })
    if not execution.reached:
        row.update({"blocked_node": execution.blocked_node,
                     "blocked_at": list(execution.blocked_at or ()), "error": execution.error})
    return row


def isolated(label, index, run):
    try:
        return run()
    except Exception as ex:  # pylint: disable=broad-except
        logger.warning("%s %d failed: %s", label, index, ex)
        return {label: index, "failed": True, "error": str(ex) or type(ex).__name__}


def evaluate_mode(fht_map: FhtMap, world: World, explored, config: ExperimentConfig,
                  mode: str) -> MetricsReport:
    report = MetricsReport(mode, storage_bytes(fht_map), fht_map.counts())
    for trial in range(config.reloc_trials):
        report.reloc_rows.append(isolated(
            "trial", trial, lambda t=trial: reloc_trial(fht_map, world, config, mode, t)))
    for pair in range(config.plan_pairs):
        report.plan_rows.append(isolated(
            "pair", pair, lambda p=pair: plan_trial(fht_map, world, explored, config, p)))
    logger.info("%s on %s: %d bytes, success rate %s", mode, world.name, report.storage_bytes,
                report.success_rate)
    return report


def run_experiment(config: ExperimentConfig, modes=None, out_dir: Optional[Path] = None,
                   world: Optional[World] = None) -> RunReport:
    modes = tuple(modes or config.modes)
    world = world or load_world_file(config.world)
    result, maps = build_maps(world, config, modes)
    explored = result.explored
    report = RunReport(
        world=world.name,
        seed=config.seed,
        config=config.as_dict(),
        exploration={
            "steps": result.steps,
            "finished": result.finished,
            "coverage": result.coverage(world.truth),
            "trajectory_length": sum(a.distance_to(b) for a, b in
                                     zip(result.trajectory, result.trajectory[1:])),
        },
        grid_baselines={"rle_bytes": rle_bytes(explored), "dense_bytes": dense_bytes(explored)},
        explored=explored,
    )
    for mode in modes:
        report.modes[mode] = evaluate_mode(maps[mode], world, explored, config, mode)

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{world.name}_explored.grid").write_text(save_grid(explored))
        (out_dir / f"{world.name}_explored.rle").write_bytes(encode_rle(explored))
        for mode, fht_map in maps.items():
            (out_dir / f"{world.name}_{mode}.json").write_bytes(serialize(fht_map))
            export_render(fht_map, explored, result.trajectory, out_dir / f"{world.name}_{mode}.txt")
    return report
