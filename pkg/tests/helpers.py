"""Small construction helpers shared across test modules."""

import numpy as np

from herdsim import ModelParams, WorldState


def make_world(sheep, shepherds, params=None, u_prev=None, t=0):
    """World from plain position lists; u_prev defaults to zero."""
    params = params or ModelParams()
    sheep = np.asarray(sheep, dtype=float).reshape(-1, 2)
    shepherds = np.asarray(shepherds, dtype=float).reshape(-1, 2)
    if u_prev is None:
        u_prev = np.zeros_like(sheep)
    return WorldState(
        t=t,
        sheep_pos=sheep,
        sheep_u_prev=np.asarray(u_prev, dtype=float).reshape(-1, 2),
        shepherd_pos=shepherds,
        shepherd_path_len=np.zeros(shepherds.shape[0]),
        params=params,
    )


def random_world(rng, n_max=5, m_max=2, params=None, span=60.0,
                 with_uprev=True):
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    u_prev = rng.uniform(-3, 3, (n, 2)) if with_uprev else None
    return make_world(rng.uniform(-span, span, (n, 2)),
                      rng.uniform(-span, span, (m, 2)),
                      params=params, u_prev=u_prev)


def rotate(v, angle):
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return np.asarray(v, dtype=float) @ rot.T
