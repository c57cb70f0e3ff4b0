"""Steering policies for the shepherd agents.

Four policies share one movement law, the weighted sum

    v_k = d1*v_k1 + d2*v_k2 + d3*v_k3 + d4*v_k4

of a chase term toward the current target, repulsion keeping distance from
visible sheep, a push away from the goal (which places the shepherd behind
its target), and goal-distance-scaled repulsion between shepherds. They
differ only in how the target is chosen and, for the occlusion variant,
which sheep enter the repulsion average:

* ``proposed`` — targets the visible sheep maximizing
  ``|p - goal| - alpha * |p - shepherd|`` (close to the shepherd, far from
  the goal); fully decentralized.
* ``fat`` — the same rule with alpha = 0, i.e. the visible sheep farthest
  from the goal.
* ``fat-occ`` — ``fat`` with the sheep-repulsion average restricted to
  sheep not angularly occluded by nearer sheep.
* ``ots`` — drives an offset of the flock's mass center, switching to
  collecting the outlier sheep when the flock is too spread out. This
  baseline reads global flock state by design.

The first three policies consume only a ShepherdObservation: goal-relative
vectors of the shepherd itself and of agents inside its recognition range.
There is no inter-shepherd communication anywhere; coordination emerges
from the v_k4 repulsion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ModelParams,
    Vec2,
    WorldState,
    norm,
    phi,
    psi_stab,
    wrapped_angle_diff,
)

PROPOSED = "proposed"
FAT = "fat"
FAT_OCC = "fat-occ"
OTS = "ots"
ALL_POLICIES = (PROPOSED, FAT, FAT_OCC, OTS)


def parse_policy(name: str) -> str:
    key = name.strip().lower().replace("_", "-")
    if key not in ALL_POLICIES:
        raise ValueError(
            f"unknown policy {name!r}; expected one of {', '.join(ALL_POLICIES)}")
    return key


def effective_alpha(policy: str, params: ModelParams) -> float:
    """Target-selection trade-off used by a policy; 0 for the FAT variants."""
    return params.alpha if policy == PROPOSED else 0.0


@dataclass(frozen=True)
class ShepherdObservation:
    """Everything a shepherd may legally use to move.

    All vectors are relative to the goal center; the relative position of
    a listed agent to the shepherd is recoverable as
    ``agent_rel_goal - own_rel_goal``. Only agents strictly inside the
    recognition radius appear; absolute positions and other shepherds'
    targets never do.
    """

    own_rel_goal: Vec2            # q_k - goal
    sheep_idx: np.ndarray         # (n',) ascending sheep indices
    sheep_rel_goal: np.ndarray    # (n', 2) rows p_j - goal
    shepherd_idx: np.ndarray      # (m',) ascending shepherd indices
    shepherd_rel_goal: np.ndarray  # (m', 2) rows q_l - goal


def observe(world: WorldState, k: int) -> ShepherdObservation:
    """Build shepherd k's observation; the only gateway through which the
    restricted policies read world state."""
    goal = world.params.goal_center
    rp = world.params.r_prime
    q = world.shepherd_pos[k]

    ds = norm(world.sheep_pos - q)
    sel = (ds > 0.0) & (ds < rp)
    dq = norm(world.shepherd_pos - q)
    selq = (dq > 0.0) & (dq < rp)
    selq[k] = False

    return ShepherdObservation(
        own_rel_goal=q - goal,
        sheep_idx=np.flatnonzero(sel),
        sheep_rel_goal=world.sheep_pos[sel] - goal,
        shepherd_idx=np.flatnonzero(selq),
        shepherd_rel_goal=world.shepherd_pos[selq] - goal,
    )


def select_target_weighted(obs: ShepherdObservation,
                           alpha: float) -> tuple[int, Vec2] | None:
    """Pick the visible sheep maximizing |p-goal| - alpha*|p-shepherd|.

    Returns (sheep index, position relative to the shepherd), or None when
    no sheep is visible. Ties break to the smallest index.
    """
    if obs.sheep_idx.size == 0:
        return None
    rel_shep = obs.sheep_rel_goal - obs.own_rel_goal
    scores = norm(obs.sheep_rel_goal) - alpha * norm(rel_shep)
    j = int(np.argmax(scores))
    return int(obs.sheep_idx[j]), rel_shep[j]


def _occluded_local(obs: ShepherdObservation, theta: float) -> np.ndarray:
    """Ascending local indices of sheep recognizable under occlusion.

    Sheep are visited nearest-first; one is admitted iff its heading from
    the shepherd differs by more than theta from every sheep already
    admitted, so a farther sheep hides behind a nearer one on almost the
    same bearing. The nearest visible sheep is always admitted.
    """
    rel = obs.sheep_rel_goal - obs.own_rel_goal
    dist = norm(rel)
    heading = np.arctan2(rel[:, 1], rel[:, 0])
    sep = wrapped_angle_diff(heading[:, None], heading[None, :]) > theta
    admitted: list[int] = []
    for j in np.argsort(dist, kind="stable"):
        if not admitted or sep[j, admitted].all():
            admitted.append(int(j))
    admitted.sort()
    return np.asarray(admitted, dtype=int)


def occluded_visible_set(obs: ShepherdObservation, theta: float) -> set[int]:
    """Sheep indices that survive the occlusion filter; subset of the
    visible set."""
    local = _occluded_local(obs, theta)
    return set(obs.sheep_idx[local].tolist())


def select_target_ots(world: WorldState, params: ModelParams) -> Vec2:
    """Switching target point: an offset behind the flock center while the
    flock is compact (drive), or toward the sheep farthest from the center
    when it has spread beyond r_ots (collect)."""
    pos = world.sheep_pos
    center = pos.sum(axis=0) / pos.shape[0]
    spread = norm(center - pos)
    far = int(np.argmax(spread))
    if spread[far] <= params.r_ots:
        return center + params.d_ots * phi(center - params.goal_center)
    return center + params.d_ots * phi(pos[far] - center)


def _combine(obs: ShepherdObservation, params: ModelParams,
             chase_rel: Vec2 | None, repulse_local: np.ndarray | None) -> Vec2:
    """Weighted sum of the four steering terms, computed from observation
    fields only. chase_rel is the target position relative to the shepherd
    (None -> zero chase term); repulse_local restricts the sheep-repulsion
    average (None -> all visible sheep)."""
    if chase_rel is None:
        v1 = np.zeros(2)
    else:
        v1 = phi(chase_rel)

    rel_sheep = obs.sheep_rel_goal - obs.own_rel_goal
    if repulse_local is not None:
        rel_sheep = rel_sheep[repulse_local]
    if rel_sheep.shape[0] > 0:
        v2 = -(psi_stab(rel_sheep, params.r_under).sum(axis=0)
               / rel_sheep.shape[0])
    else:
        v2 = np.zeros(2)

    v3 = -phi(-obs.own_rel_goal)

    rel_shep = obs.shepherd_rel_goal - obs.own_rel_goal
    if rel_shep.shape[0] > 0:
        w = norm(obs.own_rel_goal)
        v4 = -(w * (psi_stab(rel_shep, params.r_under).sum(axis=0)
                    / rel_shep.shape[0]))
    else:
        v4 = np.zeros(2)

    return params.d1 * v1 + params.d2 * v2 + params.d3 * v3 + params.d4 * v4


def velocity_from_observation(obs: ShepherdObservation, params: ModelParams,
                              policy: str) -> Vec2:
    """Movement vector of a restricted policy as a pure function of the
    observation; rejects the global-state baseline."""
    if policy == OTS:
        raise ValueError("ots reads global flock state; use shepherd_velocity")
    target = select_target_weighted(obs, effective_alpha(policy, params))
    chase_rel = None if target is None else target[1]
    repulse = _occluded_local(obs, params.theta) if policy == FAT_OCC else None
    return _combine(obs, params, chase_rel, repulse)


def shepherd_velocity(world: WorldState, k: int, policy: str) -> Vec2:
    """Movement vector v_k of shepherd k under the given policy."""
    policy = parse_policy(policy)
    obs = observe(world, k)
    if policy == OTS:
        xi = select_target_ots(world, world.params)
        return _combine(obs, world.params, xi - world.shepherd_pos[k], None)
    return velocity_from_observation(obs, world.params, policy)


def shepherd_velocities(world: WorldState, policy: str) -> np.ndarray:
    """Movement vectors for all shepherds, shape (M, 2). The switching
    baseline's target point is shared across shepherds within a step."""
    policy = parse_policy(policy)
    out = np.empty((world.n_shepherds, 2))
    if policy == OTS:
        xi = select_target_ots(world, world.params)
        for k in range(world.n_shepherds):
            obs = observe(world, k)
            out[k] = _combine(obs, world.params, xi - world.shepherd_pos[k],
                              None)
    else:
        for k in range(world.n_shepherds):
            out[k] = velocity_from_observation(observe(world, k),
                                               world.params, policy)
    return out
