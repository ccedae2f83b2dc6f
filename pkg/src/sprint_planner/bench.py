"""Benchmark harness: planner x scene x seed grids, the delta-usefulness
metric, heuristic ablations, CSV output, and optional SVG renders.

The delta-useful ratio counts, over ALL oracle queries of a trial (free and
colliding), the fraction that were free and landed within delta of the final
path.  Sample budgets, not wall-clock limits, bound every trial so results
are machine-independent; wall time is recorded but never a stop condition.
"""

from __future__ import annotations

import csv
import enum
import json
import math
import statistics
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import baselines, global_planner
from .geometry import Config, unit
from .global_planner import PlanResult, PlanStatus, SprintParams, SprintVariant
from .params import BaselineParams
from .render import render_svg
from .scenes import FIXTURE_NAMES, fixture_endpoints, fixture_scene
from .world import CollisionOracle, Scene, load_scene

CSV_HEADER = "planner,scene,seed,status,total_samples,path_length,wall_time_s,delta_useful_ratio"

PLANNER_IDS = ("sprint", "rrt", "rrt-connect")


class AblationMode(enum.Enum):
    DEFAULT = "default"
    RANDOM_PARAMS = "random-params"
    NO_PR1 = "no-pr1"
    NO_PR2 = "no-pr2"
    NO_PR3 = "no-pr3"


@dataclass
class TrialRecord:
    planner: str
    scene: str
    seed: int
    status: str
    total_samples: int
    path_length: float
    wall_time_s: float
    delta_useful_ratio: float | None


def delta_useful_ratio(samples: list[tuple[Config, bool]], path: np.ndarray,
                       delta: float) -> float:
    """Fraction of oracle samples that were free and lie within delta of the
    solution path (point-to-segment distance with clamped projection)."""
    if not samples:
        raise ValueError("delta_useful_ratio requires a nonempty sample list")
    if delta <= 0:
        raise ValueError("delta must be positive")
    path = np.asarray(path, dtype=float)
    if path.ndim != 2 or path.shape[0] < 2:
        raise ValueError("path must be an (n, d) polyline with n >= 2")
    free_pts = np.array([q for q, free in samples if free])
    if free_pts.size == 0:
        return 0.0
    a = path[:-1]
    seg = path[1:] - a
    seg_len2 = np.einsum("ij,ij->i", seg, seg)
    seg_len2 = np.where(seg_len2 == 0.0, 1.0, seg_len2)
    useful = 0
    # chunk over samples to bound the (samples x segments) intermediate
    for chunk in np.array_split(free_pts, max(1, len(free_pts) // 2048)):
        rel = chunk[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("kij,ij->ki", rel, seg) / seg_len2, 0.0, 1.0)
        closest = a[None, :, :] + t[:, :, None] * seg[None, :, :]
        d2 = np.sum((chunk[:, None, :] - closest) ** 2, axis=2)
        useful += int(np.count_nonzero(np.min(d2, axis=1) <= delta * delta))
    return useful / len(samples)


_PERTURBED_FIELDS = ("lam", "kappa", "w1_g", "w2_g", "w1_l", "w2_l", "w3_l",
                     "c_base", "sigma_slack", "n_scale", "eta", "eps_prog")


def apply_ablation(params: SprintParams, mode: AblationMode,
                   rng: np.random.Generator) -> tuple[SprintParams, SprintVariant]:
    """Build the (params, heuristic-overrides) pair for one ablation mode.

    Never mutates the input params.  RandomParams scales every continuous
    parameter by an independent uniform factor in [0.75, 1.25]; the NoPr*
    modes swap one heuristic for its random counterpart.
    """
    if mode is AblationMode.DEFAULT:
        return params, SprintVariant()
    if mode is AblationMode.RANDOM_PARAMS:
        changes = {}
        for name in _PERTURBED_FIELDS:
            value = getattr(params, name)
            if value is None:
                value = getattr(params, f"{name}_eff")
            factor = float(rng.uniform(0.75, 1.25))
            changes[name] = value * factor
        return replace(params, **changes), SprintVariant()
    if mode is AblationMode.NO_PR1:
        return params, SprintVariant(random_region_select=True)
    if mode is AblationMode.NO_PR2:
        def coin_gate(node_id, tree, p, rng_):
            return bool(rng_.random() < 0.5)
        return params, SprintVariant(gate_fn=coin_gate)
    if mode is AblationMode.NO_PR3:
        def random_edge(node_id, tree, obs, p, rng_):
            d = tree.root.shape[0]
            direction = rng_.normal(size=d)
            return tree.nodes[node_id].config + p.lam * unit(direction)
        return params, SprintVariant(edge_fn=random_edge)
    raise ValueError(f"unknown ablation mode: {mode}")


def resolve_scene(ident: str) -> Scene:
    """Fixture name or path to a scene JSON file."""
    if ident in FIXTURE_NAMES:
        return fixture_scene(ident)
    p = Path(ident)
    if p.exists():
        return load_scene(p)
    raise ValueError(f"unknown scene {ident!r}: not a fixture name or existing file")


def _parse_planner(ident: str) -> tuple[str, AblationMode]:
    """Planner spec 'sprint', 'rrt', 'rrt-connect', or 'sprint:<ablation>'."""
    base, _, abl = ident.partition(":")
    if base not in PLANNER_IDS:
        raise ValueError(f"unknown planner {base!r}; known: {', '.join(PLANNER_IDS)}")
    if abl:
        if base != "sprint":
            raise ValueError("ablations apply to the sprint planner only")
        try:
            mode = AblationMode(abl)
        except ValueError:
            raise ValueError(f"unknown ablation {abl!r}") from None
    else:
        mode = AblationMode.DEFAULT
    return base, mode


def run_trial(planner: str, scene: Scene, start: Config, goal: Config, seed: int,
              params: SprintParams, max_samples: int,
              scene_label: str | None = None,
              record_samples: bool = True) -> tuple[TrialRecord, PlanResult, CollisionOracle]:
    """Execute a single planning trial.

    With record_samples enabled (the default) the oracle keeps the full query
    log and solved trials get a delta-useful ratio; without it the ratio
    column is left empty, which suits grids that only need sample counts.
    """
    base, mode = _parse_planner(planner)
    oracle = CollisionOracle(scene, record_samples=record_samples)
    rng = np.random.default_rng(seed)
    if base == "sprint":
        p = replace(params, max_total_samples=max_samples, seed=seed)
        p2, variant = apply_ablation(p, mode, rng)
        result = global_planner.plan(start, goal, oracle, p2, rng, variant=variant)
        delta = 2.0 * p2.lam
    else:
        bp = BaselineParams(step=params.lam, max_samples=max_samples, seed=seed)
        fn = baselines.rrt_plan if base == "rrt" else baselines.rrt_connect_plan
        result = fn(start, goal, oracle, bp, rng)
        delta = 2.0 * params.lam
    ratio = None
    if record_samples and result.status is PlanStatus.SOLVED:
        ratio = delta_useful_ratio(oracle.samples, result.path, delta)
    record = TrialRecord(
        planner=planner, scene=scene_label or scene.name, seed=seed,
        status=result.status.value, total_samples=result.total_samples,
        path_length=result.path_length, wall_time_s=result.wall_time,
        delta_useful_ratio=ratio,
    )
    return record, result, oracle


def _fmt_field(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "" if math.isnan(x) else f"{x:.9g}"
    return str(x)


def record_row(r: TrialRecord) -> list[str]:
    return [r.planner, r.scene, str(r.seed), r.status, str(r.total_samples),
            _fmt_field(r.path_length), f"{r.wall_time_s:.6f}",
            _fmt_field(r.delta_useful_ratio)]


def _aggregate_rows(records: list[TrialRecord]) -> list[list[str]]:
    cells: dict[tuple[str, str], list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.planner, r.scene), []).append(r)
    rows = []
    for (planner, scene), recs in sorted(cells.items()):
        solved = [r for r in recs if r.status == "Solved"]
        status = f"solved={len(solved)}/{len(recs)}"
        samples = [r.total_samples for r in recs]
        lengths = [r.path_length for r in solved]
        times = [r.wall_time_s for r in recs]
        ratios = [r.delta_useful_ratio for r in solved if r.delta_useful_ratio is not None]

        def stats(values, fn):
            return fn(values) if values else None

        for label, fn in (("median", statistics.median), ("mean", statistics.fmean),
                          ("stderr", _stderr)):
            rows.append([planner, scene, label, status,
                         _fmt_field(stats(samples, fn)),
                         _fmt_field(stats(lengths, fn)),
                         _fmt_field(stats(times, fn)),
                         _fmt_field(stats(ratios, fn))])
    return rows


def _stderr(values) -> float:
    if len(values) < 2:
        return 0.0
    return statistics.stdev(values) / math.sqrt(len(values))


def write_csv(records: list[TrialRecord], path) -> None:
    records = sorted(records, key=lambda r: (r.planner, r.scene, r.seed))
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CSV_HEADER.split(","))
        for r in records:
            w.writerow(record_row(r))
        for row in _aggregate_rows(records):
            w.writerow(row)


def load_grid_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        cfg = json.load(f)
    for key in ("scenes", "planners"):
        if key not in cfg or not cfg[key]:
            raise ValueError(f"grid config missing {key!r}")
    return cfg


def run_grid(config_path, out_dir) -> list[TrialRecord]:
    """Run the full planner x scene x seed grid from a JSON config and write
    results.csv (plus SVGs for 2-D scenes when requested) into out_dir."""
    cfg = load_grid_config(config_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    seeds_cfg = cfg.get("seeds", {"start": 0, "count": 10})
    if isinstance(seeds_cfg, dict):
        seeds = list(range(seeds_cfg.get("start", 0),
                           seeds_cfg.get("start", 0) + seeds_cfg["count"]))
    else:
        seeds = [int(s) for s in seeds_cfg]
    max_samples = int(cfg.get("max_samples", 50_000))
    params = SprintParams(**cfg.get("params", {}))
    want_svg = bool(cfg.get("svg", False))

    # validate everything before any trial runs
    scenes = {}
    for ident in cfg["scenes"]:
        scenes[ident] = resolve_scene(ident)
    for planner in cfg["planners"]:
        _parse_planner(planner)

    records = []
    for planner in cfg["planners"]:
        for ident, scene in scenes.items():
            if "endpoints" in cfg and ident in cfg["endpoints"]:
                start = np.array(cfg["endpoints"][ident][0], dtype=float)
                goal = np.array(cfg["endpoints"][ident][1], dtype=float)
            else:
                start, goal = fixture_endpoints(ident)
            for seed in seeds:
                rec, result, oracle = run_trial(planner, scene, start, goal, seed,
                                                params, max_samples, scene_label=ident)
                records.append(rec)
                if want_svg and scene.dim == 2:
                    svg = render_svg(scene, oracle.samples, result.tree_edges,
                                     result.path, result.total_samples)
                    name = f"{planner.replace(':', '_')}__{ident}__{seed}.svg"
                    (out_dir / name).write_text(svg, encoding="utf-8")

    write_csv(records, out_dir / "results.csv")
    return records
