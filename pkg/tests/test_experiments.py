"""Scenario sampling, seed derivation, and batch aggregation."""

import numpy as np
import pytest

from herdsim import (
    ModelParams,
    ScenarioConfig,
    TrialResult,
    make_scenario,
    run_batch,
    sample_sheep_positions,
    sample_shepherd_positions,
    sweep_shepherd_count,
    trial_seed,
)
from herdsim.experiments import aggregate, splitmix64, summarize


def _trial(success, steps, mean_path_len):
    return TrialResult(success=success, steps=steps,
                       path_len_per_shepherd=[mean_path_len],
                       mean_path_len=mean_path_len)


class TestSeeding:
    def test_splitmix_is_deterministic(self):
        assert splitmix64(0, 42) == splitmix64(0, 42)
        assert trial_seed(42, 3) == trial_seed(42, 3)

    def test_trial_seeds_distinct(self):
        seeds = {trial_seed(7, i) for i in range(10000)}
        assert len(seeds) == 10000

    def test_distinct_across_bases(self):
        assert trial_seed(1, 0) != trial_seed(2, 0)


class TestSheepSampling:
    def test_support(self):
        rng = np.random.default_rng(0)
        p = sample_sheep_positions(rng, 5000)
        assert np.linalg.norm(p, axis=1).max() <= 80.0

    def test_uniform_by_area_moment(self):
        rng = np.random.default_rng(1)
        p = sample_sheep_positions(rng, 100_000)
        mean_r2 = (p ** 2).sum(axis=1).mean()
        assert abs(mean_r2 - 3200.0) < 0.02 * 3200.0

    def test_deterministic(self):
        a = sample_sheep_positions(np.random.default_rng(9), 50)
        b = sample_sheep_positions(np.random.default_rng(9), 50)
        assert np.array_equal(a, b)


class TestShepherdSampling:
    def test_bottom_left_support(self):
        rng = np.random.default_rng(2)
        q = sample_shepherd_positions(rng, 500, "bottom-left")
        assert np.linalg.norm(q - [-100, -100], axis=1).max() <= 20.0

    def test_top_right_support(self):
        rng = np.random.default_rng(3)
        q = sample_shepherd_positions(rng, 500, "top-right")
        assert np.linalg.norm(q - [100, 100], axis=1).max() <= 20.0

    def test_surrounding_on_circle(self):
        rng = np.random.default_rng(4)
        q = sample_shepherd_positions(rng, 500, "surrounding")
        assert np.abs(np.linalg.norm(q, axis=1) - 100.0).max() < 1e-9

    def test_deterministic(self):
        a = sample_shepherd_positions(np.random.default_rng(5), 7, "surrounding")
        b = sample_shepherd_positions(np.random.default_rng(5), 7, "surrounding")
        assert np.array_equal(a, b)

    def test_unknown_placement(self):
        with pytest.raises(ValueError):
            sample_shepherd_positions(np.random.default_rng(0), 1, "north")


class TestMakeScenario:
    def test_initial_state_contract(self):
        cfg = ScenarioConfig(n_sheep=50, n_shepherds=4, seed=11)
        w = make_scenario(cfg)
        assert w.t == 0 and w.n_sheep == 50 and w.n_shepherds == 4
        assert np.array_equal(w.sheep_u_prev, np.zeros((50, 2)))
        assert np.array_equal(w.shepherd_path_len, np.zeros(4))

    def test_same_config_same_world(self):
        cfg = ScenarioConfig(seed=21)
        a, b = make_scenario(cfg), make_scenario(cfg)
        assert np.array_equal(a.sheep_pos, b.sheep_pos)
        assert np.array_equal(a.shepherd_pos, b.shepherd_pos)

    def test_different_seed_different_world(self):
        a = make_scenario(ScenarioConfig(seed=1))
        b = make_scenario(ScenarioConfig(seed=2))
        assert not np.array_equal(a.sheep_pos, b.sheep_pos)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ScenarioConfig(n_shepherds=0)
        with pytest.raises(ValueError):
            ScenarioConfig(n_sheep=0)
        with pytest.raises(ValueError):
            ScenarioConfig(placement="everywhere")


class TestStatistics:
    def test_mean_of_two(self):
        s = summarize([100.0, 200.0])
        assert s.mean == 150.0 and s.count == 2

    def test_failures_excluded_from_conditional_stats(self):
        results = [_trial(True, 100, 10.0), _trial(False, 3000, 999.0),
                   _trial(True, 200, 30.0), _trial(False, 3000, 999.0)]
        agg = aggregate(results)
        assert agg.success_rate == 0.5
        assert agg.completion_time.mean == 150.0
        assert agg.completion_time.count == 2
        assert agg.avg_path_length.mean == 20.0

    def test_all_success(self):
        agg = aggregate([_trial(True, 5, 1.0)] * 3)
        assert agg.success_rate == 1.0

    def test_success_rate_times_trials_is_integer(self):
        results = [_trial(i < 3, 10, 1.0) for i in range(7)]
        agg = aggregate(results)
        x = agg.success_rate * agg.n_trials
        assert abs(x - round(x)) < 1e-9 and round(x) == 3

    def test_no_success_gives_nan_stats(self):
        agg = aggregate([_trial(False, 3000, 1.0)])
        assert np.isnan(agg.completion_time.mean)
        assert agg.completion_time.count == 0

    def test_ci_formula_and_shrinkage(self):
        small = summarize([0.0, 2.0] * 5)
        large = summarize([0.0, 2.0] * 500)
        assert small.ci95 == pytest.approx(1.96 * small.sd / np.sqrt(10))
        assert large.ci95 < small.ci95

    def test_single_sample_has_zero_spread(self):
        s = summarize([42.0])
        assert s.sd == 0.0 and s.ci95 == 0.0


def _quick_config(**kw):
    # tiny, fast-terminating cell: few sheep started inside the goal disc
    params = ModelParams(max_steps=40)
    return ScenarioConfig(n_sheep=4, n_shepherds=2, seed=3, params=params,
                          policy="proposed", **kw)


class TestRunBatch:
    def test_deterministic_and_seeded_per_trial(self):
        cfg = _quick_config()
        results_a, agg_a = run_batch(cfg, 4)
        results_b, agg_b = run_batch(cfg, 4)
        assert [r.steps for r in results_a] == [r.steps for r in results_b]
        assert agg_a == agg_b
        # trial i reproducible standalone from the derived seed
        from dataclasses import replace

        from herdsim.engine import run_trial
        solo = run_trial(make_scenario(replace(cfg, seed=trial_seed(cfg.seed, 2))),
                         cfg.policy)
        assert solo.steps == results_a[2].steps
        assert solo.mean_path_len == results_a[2].mean_path_len

    def test_parallel_equals_serial(self):
        cfg = _quick_config()
        serial, agg_s = run_batch(cfg, 6, jobs=1)
        parallel, agg_p = run_batch(cfg, 6, jobs=2)
        assert [r.steps for r in serial] == [r.steps for r in parallel]
        assert [r.mean_path_len for r in serial] == \
            [r.mean_path_len for r in parallel]
        assert agg_s == agg_p

    def test_rejects_bad_trial_count(self):
        with pytest.raises(ValueError):
            run_batch(_quick_config(), 0)


class TestSweep:
    def test_cross_product_shape(self):
        cfg = _quick_config()
        table = sweep_shepherd_count(cfg, [1, 2], 2,
                                     policies=("proposed", "fat"),
                                     placements=("bottom-left",))
        assert set(table) == {("proposed", "bottom-left", 1),
                              ("proposed", "bottom-left", 2),
                              ("fat", "bottom-left", 1),
                              ("fat", "bottom-left", 2)}

    def test_shared_layouts_across_policies(self):
        # equal placement and M mean equal per-trial initial worlds
        cfg = _quick_config()
        a = make_scenario(ScenarioConfig(
            n_sheep=4, n_shepherds=2, seed=trial_seed(cfg.seed, 0),
            params=cfg.params, policy="proposed"))
        b = make_scenario(ScenarioConfig(
            n_sheep=4, n_shepherds=2, seed=trial_seed(cfg.seed, 0),
            params=cfg.params, policy="ots"))
        assert np.array_equal(a.sheep_pos, b.sheep_pos)
        assert np.array_equal(a.shepherd_pos, b.shepherd_pos)

    def test_rejects_empty_m_values(self):
        with pytest.raises(ValueError):
            sweep_shepherd_count(_quick_config(), [], 1)
