"""File output: trajectory and metrics CSVs, run manifests, and figures.

All floating-point values are serialized with 9 significant digits, and
every artifact is a pure function of the resolved configuration, so
re-running with the same manifest reproduces CSV bodies byte for byte.
Figures are rendered with the non-interactive matplotlib backend and saved
next to the delimited output.
"""

from __future__ import annotations

import csv
import json
import os
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .core import ModelParams, norm
from .engine import Trajectory
from .experiments import RNG_ALGORITHM, ALL_PLACEMENTS, AggregateMetrics
from .policies import ALL_POLICIES

METRICS_HEADER = ["policy", "placement", "m", "trials", "success_rate",
                  "ct_mean", "ct_sd", "ct_ci", "apl_mean", "apl_sd", "apl_ci"]


def fmt(x: float) -> str:
    """9-significant-digit decimal form used in every CSV."""
    return format(float(x), ".9g")


def write_trajectory_csv(path, trajectory: Trajectory) -> None:
    """One row per agent per step: t,agent_kind,agent_id,x,y."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["t", "agent_kind", "agent_id", "x", "y"])
        steps = trajectory.sheep.shape[0]
        for t in range(steps):
            for i, p in enumerate(trajectory.sheep[t]):
                writer.writerow([t, "sheep", i, fmt(p[0]), fmt(p[1])])
            for k, q in enumerate(trajectory.shepherds[t]):
                writer.writerow([t, "shepherd", k, fmt(q[0]), fmt(q[1])])


def read_trajectory_csv(path) -> Trajectory:
    sheep: dict[int, dict[int, tuple[float, float]]] = {}
    shep: dict[int, dict[int, tuple[float, float]]] = {}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            t = int(row["t"])
            agent = int(row["agent_id"])
            dest = sheep if row["agent_kind"] == "sheep" else shep
            dest.setdefault(t, {})[agent] = (float(row["x"]), float(row["y"]))

    def to_array(frames):
        ts = sorted(frames)
        return np.array([[frames[t][i] for i in sorted(frames[t])]
                         for t in ts])

    return Trajectory(sheep=to_array(sheep), shepherds=to_array(shep))


def path_lengths_from_trajectory(trajectory: Trajectory) -> np.ndarray:
    """Per-shepherd travel distance recomputed from recorded positions."""
    q = trajectory.shepherds
    return norm(q[1:] - q[:-1]).sum(axis=0) if q.shape[0] > 1 \
        else np.zeros(q.shape[1])


def _sorted_keys(table):
    pol_rank = {p: i for i, p in enumerate(ALL_POLICIES)}
    plc_rank = {p: i for i, p in enumerate(ALL_PLACEMENTS)}
    return sorted(table, key=lambda k: (pol_rank.get(k[0], 99),
                                        plc_rank.get(k[1], 99), k[2]))


def write_metrics_csv(path, table: dict[tuple[str, str, int],
                                        AggregateMetrics]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        for key in _sorted_keys(table):
            policy, placement, m = key
            a = table[key]
            writer.writerow([
                policy, placement, m, a.n_trials, fmt(a.success_rate),
                fmt(a.completion_time.mean), fmt(a.completion_time.sd),
                fmt(a.completion_time.ci95), fmt(a.avg_path_length.mean),
                fmt(a.avg_path_length.sd), fmt(a.avg_path_length.ci95),
            ])


def read_metrics_csv(path) -> dict[tuple[str, str, int], dict[str, float]]:
    out = {}
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            key = (row["policy"], row["placement"], int(row["m"]))
            out[key] = {c: float(row[c]) for c in METRICS_HEADER[3:]}
    return out


_PLOT_METRICS = (
    ("success_rate", "success rate",
     lambda a: (a.success_rate, None)),
    ("completion_time", "completion time (steps)",
     lambda a: (a.completion_time.mean, a.completion_time.ci95)),
    ("path_length", "average path length",
     lambda a: (a.avg_path_length.mean, a.avg_path_length.ci95)),
)


def write_plot_data(out_dir, table, m_values, policies=ALL_POLICIES,
                    placements=ALL_PLACEMENTS) -> list[str]:
    """Per-metric, per-placement series files: one row per M, one mean
    column per policy (plus a CI column where the metric has one)."""
    written = []
    for name, _, extract in _PLOT_METRICS:
        with_ci = name != "success_rate"
        for placement in placements:
            fname = os.path.join(out_dir, f"plot_{name}_{placement}.csv")
            with open(fname, "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                header = ["m"]
                for p in policies:
                    header.append(p)
                    if with_ci:
                        header.append(f"{p}_ci")
                writer.writerow(header)
                for m in m_values:
                    row = [m]
                    for p in policies:
                        value, ci = extract(table[(p, placement, m)])
                        row.append(fmt(value))
                        if with_ci:
                            row.append(fmt(ci))
                    writer.writerow(row)
            written.append(fname)
    return written


def render_metric_figures(out_dir, table, m_values, policies=ALL_POLICIES,
                          placements=ALL_PLACEMENTS, dpi=150) -> list[str]:
    """One figure per metric, one panel per placement, one line per policy
    with a shaded confidence band where the metric has one."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ms = list(m_values)
    written = []
    for name, label, extract in _PLOT_METRICS:
        fig, axes = plt.subplots(1, len(placements),
                                 figsize=(4.0 * len(placements), 3.2),
                                 sharey=True, squeeze=False)
        for ax, placement in zip(axes[0], placements):
            for policy in policies:
                means, cis = [], []
                for m in ms:
                    value, ci = extract(table[(policy, placement, m)])
                    means.append(value)
                    cis.append(ci if ci is not None else 0.0)
                means = np.asarray(means)
                cis = np.asarray(cis)
                ax.plot(ms, means, marker="o", markersize=3, label=policy)
                if name != "success_rate":
                    ax.fill_between(ms, means - cis, means + cis, alpha=0.2)
            ax.set_title(placement)
            ax.set_xlabel("number of shepherds")
        axes[0][0].set_ylabel(label)
        axes[0][-1].legend(fontsize=8)
        fig.tight_layout()
        fname = os.path.join(out_dir, f"{name}.png")
        fig.savefig(fname, dpi=dpi)
        plt.close(fig)
        written.append(fname)
    return written


def render_trajectory_figure(path, trajectory: Trajectory,
                             params: ModelParams, dpi=150) -> None:
    """Agent paths over one trial: sheep gray, shepherds red, goal circle."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    for i in range(trajectory.sheep.shape[1]):
        ax.plot(trajectory.sheep[:, i, 0], trajectory.sheep[:, i, 1],
                color="0.6", linewidth=0.4)
    ax.scatter(trajectory.sheep[-1, :, 0], trajectory.sheep[-1, :, 1],
               s=6, color="0.35", zorder=3, label="sheep (final)")
    for k in range(trajectory.shepherds.shape[1]):
        ax.plot(trajectory.shepherds[:, k, 0], trajectory.shepherds[:, k, 1],
                color="tab:red", linewidth=0.8)
    ax.scatter(trajectory.shepherds[-1, :, 0], trajectory.shepherds[-1, :, 1],
               s=14, color="tab:red", zorder=3, label="shepherds (final)")
    goal = plt.Circle(params.goal_center, params.goal_radius, fill=False,
                      color="tab:blue", linewidth=1.2, label="goal region")
    ax.add_patch(goal)
    ax.set_aspect("equal")
    ax.legend(fontsize=8, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def make_manifest(config: dict) -> dict:
    """Reproducibility record written next to every batch output."""
    return {
        "tool": "herdsim",
        "version": __version__,
        "rng": RNG_ALGORITHM,
        "created": datetime.now(timezone.utc).isoformat(),
        "config": dict(config),
    }


def write_manifest(path, config: dict) -> dict:
    manifest = make_manifest(config)
    with open(path, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest


def load_config_file(path) -> dict:
    """Read a flat JSON config; a manifest is accepted and unwrapped."""
    with open(path) as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must contain a JSON object")
    if "config" in data and isinstance(data["config"], dict):
        return dict(data["config"])
    return dict(data)
