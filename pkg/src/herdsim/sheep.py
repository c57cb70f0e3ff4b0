"""Flocking forces and movement of the passive (sheep) agents.

Each sheep combines separation, alignment, and cohesion over neighboring
sheep with repulsion from nearby shepherds:

    u_i = c1*u_i1 + c2*u_i2 + c3*u_i3 + c4*u_i4

Every term averages over the relevant neighborhood and is the zero vector
when that neighborhood is empty, so the movement is total and finite for
any world. All functions read an immutable snapshot; the engine applies
the returned movements synchronously.
"""

from __future__ import annotations

import numpy as np

from .core import (
    ALIGNMENT_AS_PRINTED,
    Vec2,
    WorldState,
    _phi_given,
    _psi_stab_given,
    norm,
    phi,
)


def _sheep_geometry(world: WorldState):
    """Pairwise offsets delta[i, j] = p_j - p_i, distances, and the
    strict-inequality neighbor mask."""
    pos = world.sheep_pos
    delta = pos[None, :, :] - pos[:, None, :]
    dist = norm(delta)
    mask = (dist > 0.0) & (dist < world.params.r)
    return delta, dist, mask


def _shepherd_geometry(world: WorldState):
    """Offsets sdelta[i, l] = q_l - p_i and the sheep-side neighbor mask."""
    sdelta = world.shepherd_pos[None, :, :] - world.sheep_pos[:, None, :]
    sdist = norm(sdelta)
    smask = (sdist > 0.0) & (sdist < world.params.r)
    return sdelta, sdist, smask


def _masked_mean(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Row-wise mean of values[i, j] over mask[i, j]; zero rows where the
    mask is empty. Summation runs in ascending j for reproducibility."""
    counts = mask.sum(axis=1)
    total = np.where(mask[:, :, None], values, 0.0).sum(axis=1)
    safe = np.where(counts == 0, 1, counts)
    return np.where((counts > 0)[:, None], total / safe[:, None], 0.0)


def separation_forces(world: WorldState) -> np.ndarray:
    delta, dist, mask = _sheep_geometry(world)
    return -_masked_mean(_psi_stab_given(delta, dist, world.params.r_under),
                         mask)


def alignment_forces(world: WorldState) -> np.ndarray:
    _, _, mask = _sheep_geometry(world)
    headings = phi(world.sheep_u_prev)
    mean = _masked_mean(np.broadcast_to(headings[None, :, :], mask.shape + (2,)),
                        mask)
    if world.params.alignment_sign == ALIGNMENT_AS_PRINTED:
        return -mean
    return mean


def cohesion_forces(world: WorldState) -> np.ndarray:
    delta, dist, mask = _sheep_geometry(world)
    return _masked_mean(_phi_given(delta, dist), mask)


def shepherd_repulsion_forces(world: WorldState) -> np.ndarray:
    sdelta, sdist, smask = _shepherd_geometry(world)
    return -_masked_mean(_psi_stab_given(sdelta, sdist, world.params.r_under),
                         smask)


def sheep_movements(world: WorldState) -> np.ndarray:
    """Movement vectors u_i for all sheep at once, shape (N, 2)."""
    p = world.params
    delta, dist, mask = _sheep_geometry(world)
    sdelta, sdist, smask = _shepherd_geometry(world)

    u1 = -_masked_mean(_psi_stab_given(delta, dist, p.r_under), mask)
    headings = phi(world.sheep_u_prev)
    u2 = _masked_mean(np.broadcast_to(headings[None, :, :], mask.shape + (2,)),
                      mask)
    if p.alignment_sign == ALIGNMENT_AS_PRINTED:
        u2 = -u2
    u3 = _masked_mean(_phi_given(delta, dist), mask)
    u4 = -_masked_mean(_psi_stab_given(sdelta, sdist, p.r_under), smask)

    return p.c1 * u1 + p.c2 * u2 + p.c3 * u3 + p.c4 * u4


def separation_force(world: WorldState, i: int) -> Vec2:
    return separation_forces(world)[i]


def alignment_force(world: WorldState, i: int) -> Vec2:
    return alignment_forces(world)[i]


def cohesion_force(world: WorldState, i: int) -> Vec2:
    return cohesion_forces(world)[i]


def shepherd_repulsion_force(world: WorldState, i: int) -> Vec2:
    return shepherd_repulsion_forces(world)[i]


def sheep_movement(world: WorldState, i: int) -> Vec2:
    return sheep_movements(world)[i]
