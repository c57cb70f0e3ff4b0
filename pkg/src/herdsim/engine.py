"""Synchronous time stepping, termination, and trial execution.

All movements for step t are computed from the state at time t and applied
simultaneously; no agent ever sees another agent's t+1 position. Force sums
accumulate in ascending agent index, so a trial is bitwise reproducible for
a given initial state, policy, and parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ModelParams, WorldState, norm
from .policies import parse_policy, shepherd_velocities
from .sheep import sheep_movements


class SimulationError(RuntimeError):
    """Raised when the dynamics produce a non-finite movement, which
    signals parameter misconfiguration rather than a recoverable state."""


@dataclass
class Trajectory:
    """Recorded positions for every agent at every step, including t=0."""

    sheep: np.ndarray      # (T+1, N, 2)
    shepherds: np.ndarray  # (T+1, M, 2)

    @property
    def n_steps(self) -> int:
        return self.sheep.shape[0] - 1


@dataclass
class TrialResult:
    success: bool
    steps: int                          # completion time, or max_steps on failure
    path_len_per_shepherd: list[float]  # sum_t |v_k(t)| per shepherd
    mean_path_len: float
    trajectory: Trajectory | None = None


def all_in_goal(world: WorldState) -> bool:
    """True iff every sheep lies in the closed goal disk (boundary counts)."""
    p = world.params
    return bool(np.all(norm(world.sheep_pos - p.goal_center) <= p.goal_radius))


def step(world: WorldState, policy: str) -> WorldState:
    """Advance one synchronous step; returns a new world, input untouched."""
    u = sheep_movements(world)
    v = shepherd_velocities(world, policy)
    if not np.all(np.isfinite(u)):
        bad = np.flatnonzero(~np.isfinite(u).all(axis=1))
        raise SimulationError(
            f"non-finite sheep movement at step {world.t} (sheep {bad.tolist()}); "
            "check model parameters")
    if not np.all(np.isfinite(v)):
        bad = np.flatnonzero(~np.isfinite(v).all(axis=1))
        raise SimulationError(
            f"non-finite shepherd movement at step {world.t} "
            f"(shepherds {bad.tolist()}); check model parameters")
    return WorldState(
        t=world.t + 1,
        sheep_pos=world.sheep_pos + u,
        sheep_u_prev=u,
        shepherd_pos=world.shepherd_pos + v,
        shepherd_path_len=world.shepherd_path_len + norm(v),
        params=world.params,
    )


def run_trial(initial: WorldState, policy: str,
              record_trajectory: bool = False) -> TrialResult:
    """Run until every sheep is in the goal region or max_steps elapse.

    The goal test runs on the state at each time t before the step is
    computed, so an already-solved initial state succeeds at steps=0 and
    the reported step count is the completion time.
    """
    policy = parse_policy(policy)
    params: ModelParams = initial.params
    world = initial
    frames_sheep = [world.sheep_pos.copy()] if record_trajectory else None
    frames_shep = [world.shepherd_pos.copy()] if record_trajectory else None

    while True:
        if all_in_goal(world):
            success = True
            break
        if world.t >= params.max_steps:
            success = False
            break
        world = step(world, policy)
        if record_trajectory:
            frames_sheep.append(world.sheep_pos.copy())
            frames_shep.append(world.shepherd_pos.copy())

    path = world.shepherd_path_len - initial.shepherd_path_len
    trajectory = None
    if record_trajectory:
        trajectory = Trajectory(sheep=np.stack(frames_sheep),
                                shepherds=np.stack(frames_shep))
    return TrialResult(
        success=success,
        steps=world.t if success else int(params.max_steps),
        path_len_per_shepherd=[float(x) for x in path],
        mean_path_len=float(path.sum() / path.shape[0]),
        trajectory=trajectory,
    )
