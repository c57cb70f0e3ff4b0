"""Core vector operators, model parameters, and simulation state.

Positions and movement vectors are float64 numpy arrays of shape (2,) for a
single agent or (..., 2) for batches; every operator here accepts both. All
functions are pure and safe to call from any thread.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np

Vec2 = np.ndarray  # shape (2,), float64


def vec2(x: float, y: float) -> Vec2:
    return np.array([x, y], dtype=float)


def norm(x: np.ndarray) -> np.ndarray | float:
    """Euclidean norm along the last axis; scalar for a single vector."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(x[..., 0] ** 2 + x[..., 1] ** 2)


def _phi_given(x: np.ndarray, n: np.ndarray) -> np.ndarray:
    den = np.where(n == 0.0, 1.0, n)
    return np.where((n > 0.0)[..., None], x / den[..., None], 0.0)


def phi(x: np.ndarray) -> np.ndarray:
    """Normalize to unit length; the zero vector maps to itself."""
    x = np.asarray(x, dtype=float)
    return _phi_given(x, norm(x))


def psi_exact(x: np.ndarray) -> np.ndarray:
    """Inverse-square repulsion kernel x/|x|^3, with 0 mapped to 0.

    Unbounded as |x| -> 0; the simulator itself always uses psi_stab.
    """
    x = np.asarray(x, dtype=float)
    n = norm(x)
    den = np.where(n == 0.0, 1.0, n)
    den = den * den * den
    return np.where((n > 0.0)[..., None], x / den[..., None], 0.0)


def _psi_stab_given(x: np.ndarray, n: np.ndarray, r_under: float) -> np.ndarray:
    ru2 = r_under * r_under
    safe = np.where(n == 0.0, 1.0, n)
    outer = x / (safe * safe * safe)[..., None]
    inner = x / (safe * ru2)[..., None]
    out = np.where((n >= r_under)[..., None], outer, inner)
    return np.where((n > 0.0)[..., None], out, 0.0)


def psi_stab(x: np.ndarray, r_under: float) -> np.ndarray:
    """Repulsion kernel with the inverse-square growth capped below r_under.

    Equal to x/|x|^3 for |x| >= r_under and to x/(|x|*r_under^2) inside,
    which bounds the magnitude by 1/r_under^2 and keeps the map continuous
    at the crossover.
    """
    x = np.asarray(x, dtype=float)
    return _psi_stab_given(x, norm(x), r_under)


def wrapped_angle_diff(a, b):
    """Absolute difference of two headings, wrapped into [0, pi]."""
    d = np.mod(np.asarray(a, dtype=float) - b + np.pi, 2.0 * np.pi) - np.pi
    return np.abs(d)


ALIGNMENT_AS_PRINTED = "as-printed"
ALIGNMENT_CONVENTIONAL = "conventional"


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Every constant of the sheep model and the steering policies.

    Defaults reproduce the reference experiment configuration. The
    alignment term carries a leading minus in the source model (it is
    anti-alignment); `alignment_sign` flips it to the conventional boids
    sign for sensitivity studies and must stay "as-printed" for benchmark
    runs.
    """

    c1: float = 100.0      # separation weight
    c2: float = 0.5        # alignment weight
    c3: float = 2.0        # cohesion weight
    c4: float = 400.0      # shepherd-repulsion weight
    r: float = 20.0        # sheep recognition radius
    r_prime: float = 100.0  # shepherd recognition radius
    d1: float = 2.5        # chase weight
    d2: float = 100.0      # sheep-distance weight
    d3: float = 1.0        # away-from-goal weight
    d4: float = 2.0        # shepherd-repulsion weight
    alpha: float = 1.0     # target-selection trade-off
    theta: float = 0.05    # occlusion angular threshold (rad)
    r_under: float = 3.0   # repulsion-kernel stabilization radius
    r_ots: float = 25.0    # flock-spread threshold for target switching
    d_ots: float = 4.0     # switching-target offset from the flock center
    goal_center: Vec2 = field(default_factory=lambda: vec2(50.0, 50.0))
    goal_radius: float = 20.0
    max_steps: int = 3000
    alignment_sign: str = ALIGNMENT_AS_PRINTED

    def __post_init__(self):
        object.__setattr__(self, "goal_center",
                           np.asarray(self.goal_center, dtype=float).reshape(2))
        self.validate()

    def validate(self) -> None:
        for name in ("c1", "c2", "c3", "c4", "d1", "d2", "d3", "d4", "alpha"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        for name in ("r", "r_prime", "theta", "r_under", "r_ots", "d_ots",
                     "goal_radius"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {v}")
        if not np.all(np.isfinite(self.goal_center)):
            raise ValueError(f"goal_center must be finite, got {self.goal_center}")
        if int(self.max_steps) < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.alignment_sign not in (ALIGNMENT_AS_PRINTED,
                                       ALIGNMENT_CONVENTIONAL):
            raise ValueError(f"unknown alignment_sign {self.alignment_sign!r}")

    def as_dict(self) -> dict:
        d = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "goal_center":
                d["goal_x"] = float(v[0])
                d["goal_y"] = float(v[1])
            elif f.name == "max_steps":
                d[f.name] = int(v)
            elif isinstance(v, str):
                d[f.name] = v
            else:
                d[f.name] = float(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        d = dict(d)
        gx = d.pop("goal_x", 50.0)
        gy = d.pop("goal_y", 50.0)
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown model parameter(s): {sorted(unknown)}")
        return cls(goal_center=vec2(gx, gy), **d)


@dataclass
class SheepState:
    pos: Vec2
    u_prev: Vec2  # movement applied at the previous step; zero at t=0


@dataclass
class ShepherdState:
    pos: Vec2
    path_len: float = 0.0  # accumulated travel distance, non-decreasing


class WorldState:
    """Synchronous simulation state: all agents at one time step.

    Agent data lives in contiguous arrays (sheep_pos, sheep_u_prev of shape
    (N, 2); shepherd_pos (M, 2); shepherd_path_len (M,)); indices are stable
    for the whole trial.
    """

    __slots__ = ("t", "sheep_pos", "sheep_u_prev", "shepherd_pos",
                 "shepherd_path_len", "params")

    def __init__(self, t: int, sheep_pos: np.ndarray, sheep_u_prev: np.ndarray,
                 shepherd_pos: np.ndarray, shepherd_path_len: np.ndarray,
                 params: ModelParams):
        self.t = int(t)
        self.sheep_pos = np.asarray(sheep_pos, dtype=float).reshape(-1, 2)
        self.sheep_u_prev = np.asarray(sheep_u_prev, dtype=float).reshape(-1, 2)
        self.shepherd_pos = np.asarray(shepherd_pos, dtype=float).reshape(-1, 2)
        self.shepherd_path_len = np.asarray(shepherd_path_len, dtype=float).reshape(-1)
        self.params = params
        if self.n_sheep < 1 or self.n_shepherds < 1:
            raise ValueError("world needs at least one sheep and one shepherd")
        if self.sheep_u_prev.shape != self.sheep_pos.shape:
            raise ValueError("sheep_u_prev shape must match sheep_pos")
        if self.shepherd_path_len.shape[0] != self.n_shepherds:
            raise ValueError("shepherd_path_len length must match shepherd_pos")

    @classmethod
    def from_agents(cls, sheep: Sequence[SheepState],
                    shepherds: Sequence[ShepherdState],
                    params: ModelParams, t: int = 0) -> "WorldState":
        return cls(
            t=t,
            sheep_pos=np.array([s.pos for s in sheep], dtype=float),
            sheep_u_prev=np.array([s.u_prev for s in sheep], dtype=float),
            shepherd_pos=np.array([s.pos for s in shepherds], dtype=float),
            shepherd_path_len=np.array([s.path_len for s in shepherds], dtype=float),
            params=params,
        )

    @property
    def n_sheep(self) -> int:
        return self.sheep_pos.shape[0]

    @property
    def n_shepherds(self) -> int:
        return self.shepherd_pos.shape[0]

    @property
    def sheep(self) -> list[SheepState]:
        return [SheepState(self.sheep_pos[i].copy(), self.sheep_u_prev[i].copy())
                for i in range(self.n_sheep)]

    @property
    def shepherds(self) -> list[ShepherdState]:
        return [ShepherdState(self.shepherd_pos[k].copy(),
                              float(self.shepherd_path_len[k]))
                for k in range(self.n_shepherds)]

    def copy(self) -> "WorldState":
        return WorldState(self.t, self.sheep_pos.copy(), self.sheep_u_prev.copy(),
                          self.shepherd_pos.copy(), self.shepherd_path_len.copy(),
                          self.params)


def sheep_neighbors(world: WorldState, i: int) -> tuple[set[int], set[int]]:
    """Indices of sheep and shepherds within the sheep's recognition radius.

    Both bounds are strict: agents at distance exactly r, and coincident
    agents (distance 0), are excluded.
    """
    r = world.params.r
    ds = norm(world.sheep_pos - world.sheep_pos[i])
    dm = norm(world.shepherd_pos - world.sheep_pos[i])
    ns = set(np.flatnonzero((ds > 0.0) & (ds < r)).tolist())
    ms = set(np.flatnonzero((dm > 0.0) & (dm < r)).tolist())
    return ns, ms


def shepherd_neighbors(world: WorldState, k: int) -> tuple[set[int], set[int]]:
    """Indices of sheep and of other shepherds within r_prime of shepherd k."""
    rp = world.params.r_prime
    ds = norm(world.sheep_pos - world.shepherd_pos[k])
    dm = norm(world.shepherd_pos - world.shepherd_pos[k])
    ns = set(np.flatnonzero((ds > 0.0) & (ds < rp)).tolist())
    ms = set(np.flatnonzero((dm > 0.0) & (dm < rp)).tolist())
    ms.discard(k)
    return ns, ms
