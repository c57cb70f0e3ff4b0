"""Command-line front end.

Two subcommands: ``run`` simulates a single trial and writes its trajectory
CSV (plus a rendered figure), ``batch`` executes the full policy/placement/
shepherd-count sweep and writes the metrics table, plot-ready series files,
figures, and a manifest sufficient to reproduce every byte of the CSVs.

Configuration precedence is flags > config file > defaults. The config
file is flat JSON; a previously written manifest is accepted anywhere a
config file is, which makes reruns exact. HERDSIM_OUT_DIR sets the default
output directory.
"""

from __future__ import annotations

import argparse
import os
import sys

from .core import (
    ALIGNMENT_AS_PRINTED,
    ALIGNMENT_CONVENTIONAL,
    ModelParams,
)
from .engine import run_trial
from .experiments import (
    ALL_PLACEMENTS,
    ScenarioConfig,
    make_scenario,
    parse_placement,
    sweep_shepherd_count,
)
from .policies import ALL_POLICIES, parse_policy
from .reports import (
    fmt,
    load_config_file,
    render_metric_figures,
    render_trajectory_figure,
    write_manifest,
    write_metrics_csv,
    write_plot_data,
    write_trajectory_csv,
)

_PARAM_FLAGS = ["c1", "c2", "c3", "c4", "r", "r_prime", "d1", "d2", "d3",
                "d4", "alpha", "theta", "r_under", "r_ots", "d_ots",
                "goal_x", "goal_y", "goal_radius"]


def default_config() -> dict:
    cfg = {
        "policy": "proposed",
        "placement": "bottom-left",
        "m": 3,
        "n": 50,
        "seed": 0,
        "trials": 100,
        "m_values": list(range(1, 11)),
        "policies": list(ALL_POLICIES),
        "placements": list(ALL_PLACEMENTS),
    }
    cfg.update(ModelParams().as_dict())
    return cfg


def _out_dir_default() -> str:
    return os.environ.get("HERDSIM_OUT_DIR", ".")


def _add_common_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON config file (or a manifest)")
    p.add_argument("--policy", help="proposed | fat | fat-occ | ots")
    p.add_argument("--placement",
                   help="bottom-left | top-right | surrounding")
    p.add_argument("--m", type=int, help="number of shepherds")
    p.add_argument("--n", type=int, help="number of sheep")
    p.add_argument("--seed", type=int, help="base RNG seed")
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.add_argument("--alignment-sign", dest="alignment_sign",
                   choices=[ALIGNMENT_AS_PRINTED, ALIGNMENT_CONVENTIONAL])
    for name in _PARAM_FLAGS:
        p.add_argument("--" + name.replace("_", "-"), type=float, dest=name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="herdsim",
        description="2-D shepherding simulator and experiment harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a single trial")
    _add_common_options(p_run)
    p_run.add_argument("--out", help="trajectory CSV path")
    p_run.add_argument("--record-trajectory", default=True,
                       action=argparse.BooleanOptionalAction,
                       help="record and write the trajectory (default on)")
    p_run.add_argument("--plot", default=True,
                       action=argparse.BooleanOptionalAction,
                       help="render a trajectory figure next to the CSV")
    p_run.set_defaults(func=cmd_run)

    p_batch = sub.add_parser("batch", help="run the metrics sweep")
    _add_common_options(p_batch)
    p_batch.add_argument("--trials", type=int, help="trials per cell")
    p_batch.add_argument("--m-values", dest="m_values",
                         help="comma-separated shepherd counts, e.g. 1,2,3")
    p_batch.add_argument("--policies",
                         help="comma-separated subset of policies to sweep")
    p_batch.add_argument("--placements",
                         help="comma-separated subset of placements to sweep")
    p_batch.add_argument("--out-dir", dest="out_dir",
                         help="output directory (default $HERDSIM_OUT_DIR)")
    p_batch.add_argument("--jobs", type=int, default=1,
                         help="worker processes for trials")
    p_batch.add_argument("--plots", default=True,
                         action=argparse.BooleanOptionalAction,
                         help="render metric figures (default on)")
    p_batch.set_defaults(func=cmd_batch)
    return parser


def _resolve_config(args: argparse.Namespace) -> dict:
    cfg = default_config()
    if args.config:
        file_cfg = load_config_file(args.config)
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise ValueError(f"unknown config key(s): {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if isinstance(cfg["m_values"], str):
        cfg["m_values"] = [int(x) for x in cfg["m_values"].split(",") if x]
    if isinstance(cfg["policies"], str):
        cfg["policies"] = [s for s in cfg["policies"].split(",") if s]
    if isinstance(cfg["placements"], str):
        cfg["placements"] = [s for s in cfg["placements"].split(",") if s]
    cfg["policy"] = parse_policy(cfg["policy"])
    cfg["placement"] = parse_placement(cfg["placement"])
    cfg["policies"] = [parse_policy(p) for p in cfg["policies"]]
    cfg["placements"] = [parse_placement(p) for p in cfg["placements"]]
    if int(cfg["trials"]) < 1:
        raise ValueError(f"trials must be >= 1, got {cfg['trials']}")
    if not cfg["m_values"] or any(int(m) < 1 for m in cfg["m_values"]):
        raise ValueError(f"m_values must be positive, got {cfg['m_values']}")
    return cfg


def _scenario_from_config(cfg: dict) -> ScenarioConfig:
    param_keys = set(_PARAM_FLAGS) | {"max_steps", "alignment_sign"}
    params = ModelParams.from_dict({k: cfg[k] for k in cfg if k in param_keys})
    return ScenarioConfig(
        n_sheep=int(cfg["n"]),
        n_shepherds=int(cfg["m"]),
        placement=cfg["placement"],
        seed=int(cfg["seed"]),
        params=params,
        policy=cfg["policy"],
    )


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    scenario = _scenario_from_config(cfg)
    result = run_trial(make_scenario(scenario), scenario.policy,
                       record_trajectory=args.record_trajectory)
    if args.record_trajectory:
        out = args.out or os.path.join(_out_dir_default(), "trajectory.csv")
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        write_trajectory_csv(out, result.trajectory)
        if args.plot:
            render_trajectory_figure(os.path.splitext(out)[0] + ".png",
                                     result.trajectory, scenario.params)
    print(f"success={result.success} steps={result.steps} "
          f"mean_path_len={fmt(result.mean_path_len)}")
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    out_dir = args.out_dir or os.path.join(_out_dir_default(),
                                           "herdsim-results")
    os.makedirs(out_dir, exist_ok=True)
    base = _scenario_from_config(cfg)

    def progress(policy, placement, m, metrics):
        print(f"{policy:9s} {placement:12s} M={m:<3d} "
              f"success_rate={metrics.success_rate:.2f} "
              f"ct_mean={metrics.completion_time.mean:.1f}", flush=True)

    table = sweep_shepherd_count(base, cfg["m_values"], int(cfg["trials"]),
                                 policies=cfg["policies"],
                                 placements=cfg["placements"],
                                 jobs=args.jobs, progress=progress)
    metrics_path = os.path.join(out_dir, "metrics.csv")
    write_metrics_csv(metrics_path, table)
    write_manifest(os.path.join(out_dir, "manifest.json"), cfg)
    written = write_plot_data(out_dir, table, cfg["m_values"],
                              policies=cfg["policies"],
                              placements=cfg["placements"])
    if args.plots:
        written += render_metric_figures(out_dir, table, cfg["m_values"],
                                         policies=cfg["policies"],
                                         placements=cfg["placements"])
    print(f"wrote {metrics_path} and {len(written) + 1} companion files "
          f"to {out_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
