"""Deterministic 2-D shepherding simulator.

Sheep follow a flocking model (separation, alignment, cohesion, repulsion
from shepherds); shepherds steer them into a goal disk under one of four
policies, three of which act on local goal-relative observations only. The
package also ships a seeded batch harness for success-rate / completion-
time / path-length comparisons and a CLI that exports CSVs and figures.
"""

__version__ = "0.1.0"

from .core import (
    ALIGNMENT_AS_PRINTED,
    ALIGNMENT_CONVENTIONAL,
    ModelParams,
    SheepState,
    ShepherdState,
    Vec2,
    WorldState,
    phi,
    psi_exact,
    psi_stab,
    sheep_neighbors,
    shepherd_neighbors,
    vec2,
    wrapped_angle_diff,
)
from .engine import SimulationError, Trajectory, TrialResult, all_in_goal, run_trial, step
from .experiments import (
    ALL_PLACEMENTS,
    AggregateMetrics,
    SampleStats,
    ScenarioConfig,
    make_scenario,
    run_batch,
    sample_sheep_positions,
    sample_shepherd_positions,
    sweep_shepherd_count,
    trial_seed,
)
from .policies import (
    ALL_POLICIES,
    FAT,
    FAT_OCC,
    OTS,
    PROPOSED,
    ShepherdObservation,
    observe,
    occluded_visible_set,
    select_target_ots,
    select_target_weighted,
    shepherd_velocity,
    velocity_from_observation,
)
from .sheep import (
    alignment_force,
    cohesion_force,
    separation_force,
    sheep_movement,
    sheep_movements,
    shepherd_repulsion_force,
)

__all__ = [name for name in dir() if not name.startswith("_")]
