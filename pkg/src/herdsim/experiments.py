"""Seeded scenario generation and the batch experiment harness.

A scenario places N sheep uniformly on a disc around the origin and M
shepherds according to one of three placement patterns. Batches derive one
seed per trial from the base seed with a splitmix64 mix, so results are
reproducible regardless of execution order or worker count, and trials may
run in parallel processes.

Aggregate statistics follow the benchmark definitions: the success rate is
taken over all trials, while completion-time and path-length statistics
are computed over successful trials only.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import ModelParams, WorldState
from .engine import TrialResult, run_trial
from .policies import ALL_POLICIES, parse_policy

BOTTOM_LEFT = "bottom-left"
TOP_RIGHT = "top-right"
SURROUNDING = "surrounding"
ALL_PLACEMENTS = (BOTTOM_LEFT, TOP_RIGHT, SURROUNDING)

SHEEP_DISC_RADIUS = 80.0
CLUSTER_OFFSET = 100.0
CLUSTER_RADIUS = 20.0
RING_RADIUS = 100.0

RNG_ALGORITHM = "numpy PCG64 (default_rng), per-trial seeds via splitmix64"

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(index: int, seed: int) -> int:
    """Output number `index` of the splitmix64 stream started at `seed`."""
    z = (seed + (index + 1) * _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(base_seed: int, trial_index: int) -> int:
    return splitmix64(trial_index, base_seed & _MASK64)


def parse_placement(name: str) -> str:
    key = name.strip().lower().replace("_", "-")
    if key not in ALL_PLACEMENTS:
        raise ValueError(f"unknown placement {name!r}; expected one of "
                         f"{', '.join(ALL_PLACEMENTS)}")
    return key


@dataclass(frozen=True)
class ScenarioConfig:
    n_sheep: int = 50
    n_shepherds: int = 3
    placement: str = BOTTOM_LEFT
    seed: int = 0
    params: ModelParams = ModelParams()
    policy: str = "proposed"

    def __post_init__(self):
        if int(self.n_sheep) < 1:
            raise ValueError(f"n_sheep must be >= 1, got {self.n_sheep}")
        if int(self.n_shepherds) < 1:
            raise ValueError(f"n_shepherds must be >= 1, got {self.n_shepherds}")
        object.__setattr__(self, "placement", parse_placement(self.placement))
        object.__setattr__(self, "policy", parse_policy(self.policy))


def sample_sheep_positions(rng: np.random.Generator, n: int,
                           radius: float = SHEEP_DISC_RADIUS) -> np.ndarray:
    """n points uniform by area on the origin-centered disc."""
    u = rng.random(n)
    v = rng.random(n)
    rad = radius * np.sqrt(u)
    ang = 2.0 * np.pi * v
    return np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])


def sample_shepherd_positions(rng: np.random.Generator, m: int, placement: str,
                              cluster_offset: float = CLUSTER_OFFSET,
                              cluster_radius: float = CLUSTER_RADIUS,
                              ring_radius: float = RING_RADIUS) -> np.ndarray:
    """Initial shepherd positions for a placement pattern.

    bottom-left / top-right: uniform on a small disc centered outside the
    sheep disc at (-offset, -offset) or (+offset, +offset); surrounding:
    each shepherd on the circle of ring_radius at an independent uniform
    angle.
    """
    placement = parse_placement(placement)
    if placement == SURROUNDING:
        ang = 2.0 * np.pi * rng.random(m)
        return np.column_stack([ring_radius * np.cos(ang),
                                ring_radius * np.sin(ang)])
    center = (-cluster_offset if placement == BOTTOM_LEFT else cluster_offset)
    u = rng.random(m)
    v = rng.random(m)
    rad = cluster_radius * np.sqrt(u)
    ang = 2.0 * np.pi * v
    return np.column_stack([center + rad * np.cos(ang),
                            center + rad * np.sin(ang)])


def make_scenario(config: ScenarioConfig) -> WorldState:
    """Initial world for one trial; sheep are drawn before shepherds so the
    layout is a pure function of the config."""
    rng = np.random.default_rng(config.seed)
    sheep = sample_sheep_positions(rng, config.n_sheep)
    shepherds = sample_shepherd_positions(rng, config.n_shepherds,
                                          config.placement)
    return WorldState(
        t=0,
        sheep_pos=sheep,
        sheep_u_prev=np.zeros_like(sheep),
        shepherd_pos=shepherds,
        shepherd_path_len=np.zeros(config.n_shepherds),
        params=config.params,
    )


@dataclass(frozen=True)
class SampleStats:
    count: int
    mean: float
    sd: float    # sample standard deviation (ddof=1); 0 when count < 2
    ci95: float  # normal-approximation half-width, 1.96*sd/sqrt(count)


def summarize(values) -> SampleStats:
    values = [float(v) for v in values]
    count = len(values)
    if count == 0:
        return SampleStats(0, math.nan, math.nan, math.nan)
    mean = sum(values) / count
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (count - 1)) \
        if count > 1 else 0.0
    return SampleStats(count, mean, sd, 1.96 * sd / math.sqrt(count))


@dataclass(frozen=True)
class AggregateMetrics:
    n_trials: int
    success_rate: float              # over all trials
    completion_time: SampleStats     # over successful trials only
    avg_path_length: SampleStats     # over successful trials only


def aggregate(results: list[TrialResult]) -> AggregateMetrics:
    succ = [r for r in results if r.success]
    return AggregateMetrics(
        n_trials=len(results),
        success_rate=len(succ) / len(results),
        completion_time=summarize([r.steps for r in succ]),
        avg_path_length=summarize([r.mean_path_len for r in succ]),
    )


def _run_one(config: ScenarioConfig) -> TrialResult:
    return run_trial(make_scenario(config), config.policy)


def run_batch(config: ScenarioConfig, n_trials: int,
              jobs: int = 1) -> tuple[list[TrialResult], AggregateMetrics]:
    """Run n_trials independently seeded trials of one scenario cell."""
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    cfgs = [replace(config, seed=trial_seed(config.seed, i))
            for i in range(n_trials)]
    if jobs > 1:
        chunk = max(1, n_trials // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, cfgs, chunksize=chunk))
    else:
        results = [_run_one(c) for c in cfgs]
    return results, aggregate(results)


def sweep_shepherd_count(base_config: ScenarioConfig, m_values, n_trials: int,
                         policies=ALL_POLICIES, placements=ALL_PLACEMENTS,
                         jobs: int = 1,
                         progress=None) -> dict[tuple[str, str, int],
                                                AggregateMetrics]:
    """Metrics for the cross-product of policies, placements, and shepherd
    counts. Cells with equal placement and M share per-trial seeds (and so
    initial layouts), making policies directly comparable."""
    m_values = [int(m) for m in m_values]
    if not m_values:
        raise ValueError("m_values must be non-empty")
    table: dict[tuple[str, str, int], AggregateMetrics] = {}
    for policy in policies:
        for placement in placements:
            for m in m_values:
                cfg = replace(base_config, policy=policy,
                              placement=placement, n_shepherds=m)
                _, metrics = run_batch(cfg, n_trials, jobs=jobs)
                table[(policy, placement, m)] = metrics
                if progress is not None:
                    progress(policy, placement, m, metrics)
    return table
