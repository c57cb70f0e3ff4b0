"""Vector operators, parameter validation, and neighborhood sets."""

import numpy as np
import pytest

from herdsim import (
    ModelParams,
    SheepState,
    ShepherdState,
    WorldState,
    phi,
    psi_exact,
    psi_stab,
    sheep_neighbors,
    shepherd_neighbors,
    vec2,
    wrapped_angle_diff,
)
from helpers import make_world, rotate


class TestPhi:
    def test_zero_maps_to_zero_exactly(self):
        assert np.array_equal(phi(vec2(0, 0)), vec2(0, 0))

    def test_analytic(self):
        assert np.allclose(phi(vec2(3, 4)), [0.6, 0.8], atol=1e-15)
        assert np.allclose(phi(vec2(-5, 0)), [-1.0, 0.0], atol=1e-15)

    def test_unit_norm(self):
        rng = np.random.default_rng(1)
        x = rng.uniform(-100, 100, (2000, 2))
        n = np.linalg.norm(phi(x), axis=1)
        assert np.abs(n - 1.0).max() < 1e-12

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(-50, 50, (500, 2))
        w = rng.uniform(0, 2 * np.pi)
        assert np.allclose(phi(rotate(x, w)), rotate(phi(x), w), atol=1e-9)


class TestPsi:
    def test_exact_values(self):
        assert np.array_equal(psi_exact(vec2(0, 0)), vec2(0, 0))
        assert np.allclose(psi_exact(vec2(3, 4)), [0.024, 0.032], atol=1e-15)
        # |x| = 0.5 so the magnitude is 1/|x|^2 = 4
        assert np.allclose(psi_exact(vec2(0, 0.5)), [0.0, 4.0], atol=1e-12)

    def test_stab_values(self):
        assert np.allclose(psi_stab(vec2(3, 4), 3.0), [0.024, 0.032],
                           atol=1e-15)
        assert np.allclose(psi_stab(vec2(1, 0), 3.0), [1 / 9, 0], atol=1e-15)
        assert np.array_equal(psi_stab(vec2(0, 0), 3.0), vec2(0, 0))

    def test_stab_continuous_at_crossover(self):
        # both branches give x/r_under^3 = (1/9, 0) at |x| = r_under = 3
        assert np.allclose(psi_stab(vec2(3, 0), 3.0), [1 / 9, 0], atol=1e-15)
        u = vec2(3, 0) / 3.0
        lo = psi_stab(u * (3.0 * (1 - 1e-9)), 3.0)
        hi = psi_stab(u * (3.0 * (1 + 1e-9)), 3.0)
        rel = np.linalg.norm(lo - hi) / np.linalg.norm(hi)
        assert rel < 1e-6

    def test_stab_bounded(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(-10, 10, (5000, 2))
        n = np.linalg.norm(psi_stab(x, 3.0), axis=1)
        assert n.max() <= 1 / 9 + 1e-12

    def test_stab_matches_exact_outside(self):
        rng = np.random.default_rng(4)
        d = phi(rng.uniform(-1, 1, (2000, 2))) * rng.uniform(3.0, 50.0,
                                                             (2000, 1))
        assert np.array_equal(psi_stab(d, 3.0), psi_exact(d))

    def test_stab_rotation_equivariance(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(-10, 10, (500, 2))
        w = 1.234
        assert np.allclose(psi_stab(rotate(x, w), 3.0),
                           rotate(psi_stab(x, 3.0), w), atol=1e-9)


class TestWrappedAngleDiff:
    def test_examples(self):
        assert wrapped_angle_diff(0.03, 0.0) == pytest.approx(0.03)
        assert wrapped_angle_diff(np.pi - 0.01, -np.pi + 0.01) == \
            pytest.approx(0.02)
        assert wrapped_angle_diff(1.7, 1.7) == 0.0

    def test_range_and_symmetry(self):
        rng = np.random.default_rng(6)
        a = rng.uniform(-10, 10, 3000)
        b = rng.uniform(-10, 10, 3000)
        d = wrapped_angle_diff(a, b)
        assert np.all(d >= 0.0) and np.all(d <= np.pi + 1e-12)
        assert np.allclose(d, wrapped_angle_diff(b, a), atol=1e-12)


class TestNeighborhoods:
    def test_sheep_strict_bounds(self):
        w = make_world([[0, 0], [0, 20]], [[500, 500]])
        assert sheep_neighbors(w, 0)[0] == set()
        w = make_world([[0, 0], [0, 19.9]], [[500, 500]])
        assert sheep_neighbors(w, 0)[0] == {1}
        w = make_world([[0, 0], [0, 0]], [[500, 500]])
        assert sheep_neighbors(w, 0)[0] == set()

    def test_sheep_sees_shepherd(self):
        w = make_world([[0, 0]], [[0, 10]])
        assert sheep_neighbors(w, 0) == (set(), {0})
        w = make_world([[0, 0]], [[0, 20]])
        assert sheep_neighbors(w, 0) == (set(), set())

    def test_shepherd_strict_bounds(self):
        w = make_world([[99, 0]], [[0, 0]])
        assert shepherd_neighbors(w, 0)[0] == {0}
        w = make_world([[100, 0]], [[0, 0]])
        assert shepherd_neighbors(w, 0)[0] == set()
        w = make_world([[500, 500]], [[0, 0], [0, 0]])
        assert shepherd_neighbors(w, 0)[1] == set()

    def test_symmetry(self):
        rng = np.random.default_rng(7)
        w = make_world(rng.uniform(-30, 30, (12, 2)), [[500, 500]])
        for i in range(12):
            for j in sheep_neighbors(w, i)[0]:
                assert i in sheep_neighbors(w, j)[0]


class TestModelParams:
    def test_defaults_match_reference_configuration(self):
        p = ModelParams()
        assert (p.c1, p.c2, p.c3, p.c4) == (100.0, 0.5, 2.0, 400.0)
        assert p.r == 20.0 and p.r_prime == 100.0
        assert (p.d1, p.d2, p.d3, p.d4) == (2.5, 100.0, 1.0, 2.0)
        assert p.alpha == 1.0 and p.theta == 0.05 and p.r_under == 3.0
        assert p.r_ots == 25.0 and p.d_ots == 4.0
        assert np.array_equal(p.goal_center, [50.0, 50.0])
        assert p.goal_radius == 20.0 and p.max_steps == 3000

    @pytest.mark.parametrize("kwargs", [
        {"r": -1.0}, {"r": 0.0}, {"goal_radius": -5.0}, {"max_steps": 0},
        {"c1": -2.0}, {"theta": 0.0}, {"r_under": float("nan")},
        {"alignment_sign": "sometimes"},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ModelParams(**kwargs)

    def test_dict_round_trip(self):
        p = ModelParams(c2=0.75, goal_center=vec2(10, -4), max_steps=77)
        q = ModelParams.from_dict(p.as_dict())
        assert q.as_dict() == p.as_dict()

    def test_from_dict_rejects_unknown(self):
        with pytest.raises(ValueError):
            ModelParams.from_dict({"c9": 1.0})


class TestWorldState:
    def test_from_agents(self):
        w = WorldState.from_agents(
            [SheepState(vec2(1, 2), vec2(0, 0))],
            [ShepherdState(vec2(3, 4), 5.0)],
            ModelParams(),
        )
        assert w.n_sheep == 1 and w.n_shepherds == 1
        assert np.array_equal(w.sheep_pos, [[1, 2]])
        assert w.shepherds[0].path_len == 5.0

    def test_requires_agents(self):
        with pytest.raises(ValueError):
            WorldState(0, np.zeros((0, 2)), np.zeros((0, 2)),
                       np.zeros((1, 2)), np.zeros(1), ModelParams())
