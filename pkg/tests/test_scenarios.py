import math

import numpy as np
import pytest

from polyvo import engine, scenarios
from polyvo.geometry import circumradius, intersects, world_vertices
from polyvo.policy import Method


def starts(cfg):
    return np.array([r.start.position for r in cfg.robots])


def goals(cfg):
    return np.array([r.goal for r in cfg.robots])


def rotate(pts, a):
    c, s = math.cos(a), math.sin(a)
    d = pts - 5.0
    return np.column_stack((c * d[:, 0] - s * d[:, 1], s * d[:, 0] + c * d[:, 1])) + 5.0


class TestCircle:
    def test_first_robot(self):
        cfg = scenarios.circle_scenario(8)
        assert cfg.robots[0].start.position == pytest.approx((9, 5))
        assert cfg.robots[0].goal == pytest.approx((1, 5))

    def test_heads_to_center(self):
        for r in scenarios.circle_scenario(8).robots:
            to_c = math.atan2(5 - r.start.position[1], 5 - r.start.position[0])
            assert math.remainder(r.start.heading - to_c, 2 * math.pi) == pytest.approx(0, abs=1e-12)

    def test_two_is_head_on(self):
        cfg = scenarios.circle_scenario(2)
        assert cfg.robots[1].start.position == pytest.approx((1, 5))

    @pytest.mark.parametrize("n", [2, 5, 8, 16])
    def test_rotation_symmetry_and_validity(self, n):
        cfg = scenarios.circle_scenario(n)
        for pts in (starts(cfg), goals(cfg)):
            rot = rotate(pts, 2 * math.pi / n)
            d = np.linalg.norm(rot[:, None, :] - pts[None, :, :], axis=2).min(axis=1)
            assert d.max() < 1e-9
        engine.initial_world(cfg)


class TestRandom:
    def test_dimensions(self):
        for ratio, (L, W) in [(1.0, (1.0, 0.6)), (0.4, (0.4, 0.24))]:
            body = scenarios.random_scenario(1, ratio).robots[0].body
            xs, ys = zip(*body.vertices)
            assert max(xs) - min(xs) == pytest.approx(L)
            assert max(ys) - min(ys) == pytest.approx(W)

    def test_pure_function(self):
        assert scenarios.random_scenario(42, 1.2) == scenarios.random_scenario(42, 1.2)
        assert scenarios.random_scenario(42, 1.2) != scenarios.random_scenario(43, 1.2)

    def test_on_circle_and_arena(self):
        cfg = scenarios.random_scenario(3, 1.0)
        for pts in (starts(cfg), goals(cfg)):
            assert np.hypot(*(pts - 5).T) == pytest.approx(4.0)
            assert ((pts >= 0) & (pts <= 10)).all()

    @pytest.mark.parametrize("ratio", scenarios.ALL_RATIOS)
    def test_valid_for_all_ratios(self, ratio):
        for seed in range(10):
            cfg = scenarios.random_scenario(seed, ratio)
            engine.initial_world(cfg)
            # goal footprints are disjoint for any heading too
            g = goals(cfg)
            r = circumradius(cfg.robots[0].body)
            dist = np.linalg.norm(g[:, None] - g[None, :], axis=2) + np.eye(len(g)) * 99
            assert dist.min() > 2 * r

    def test_shapes_disjoint_whatever_heading(self):
        cfg = scenarios.random_scenario(5, 1.4)
        for h in np.linspace(-math.pi, math.pi, 9):
            shapes = [world_vertices(r.body, type(r.start)(r.start.position, h)) for r in cfg.robots]
            assert not any(intersects(a, b) for i, a in enumerate(shapes) for b in shapes[i + 1:])

    def test_rejection_budget(self):
        with pytest.raises(scenarios.GenerationError):
            scenarios.random_scenario(0, 3.0)

    def test_bad_ratio(self):
        with pytest.raises(ValueError):
            scenarios.random_scenario(0, 0.0)

    def test_philox_stream(self):
        g = scenarios.rng_for(7)
        assert isinstance(g.bit_generator, np.random.Philox)


class TestPackaged:
    def test_obstacle_layout(self):
        cfg = scenarios.obstacle_scenario()
        assert len(cfg.robots) == 5 and len(cfg.obstacles) == 4
        moving = [o for o in cfg.obstacles if o.path is not None]
        assert len(moving) == 2
        assert {(o.path.start, o.path.end, o.path.speed) for o in moving} == {
            ((8.85, 2.35), (5.0, 2.35), 1.0), ((4.4, 4.75), (8.0, 4.75), 1.0)}
        assert cfg.params.method is Method.RVO_p

    def test_obstacle_paths(self):
        cfg = scenarios.obstacle_scenario()
        p1 = next(o.path for o in cfg.obstacles if o.path and o.path.start == (8.85, 2.35))
        p2 = next(o.path for o in cfg.obstacles if o.path and o.path.start == (4.4, 4.75))
        assert p1.at(2.0)[0] == pytest.approx((6.85, 2.35))
        assert p2.at(3.6)[0] == pytest.approx((8.0, 4.75))
        assert p2.at(5.0)[1] == (0.0, 0.0)

    def test_turnaround_geometry(self):
        cfg = scenarios.turnaround_scenario()
        (r,) = cfg.robots
        assert r.start.position == (9.0, 5.0) and r.goal == (1.0, 5.0)
        xs, ys = zip(*r.body.vertices)
        assert (max(xs) - min(xs), max(ys) - min(ys)) == pytest.approx((0.8, 0.5))
        top, bottom = [world_vertices(o.body, o.pose) for o in cfg.obstacles]
        gap = min(y for _, y in top.vertices) - max(y for _, y in bottom.vertices)
        assert 0.5 + 2 * 0.15 < gap < 2 * (math.hypot(0.4, 0.25) + 0.15)

    def test_with_method(self):
        assert scenarios.turnaround_scenario("VO_c").params.method is Method.VO_c


class TestBenchmark:
    def test_rows_and_pairing(self):
        rows = scenarios.benchmark(["VO_p", "HRVO_c"], [0.6, 0.4], trials=1, base_seed=3, workers=1)
        assert [(r.ratio, r.method) for r in rows] == [(0.6, "VO_p"), (0.6, "HRVO_c"), (0.4, "VO_p"),
                                                      (0.4, "HRVO_c")]
        for r in rows:
            assert r.completion_rate in {100 * k / 8 for k in range(9)}
            assert r.trials == 1 and r.seed == 3

    def test_table_by_ratio(self):
        rows = scenarios.benchmark(["VO_p", "VO_c"], [0.4], trials=1, workers=1)
        (rec,) = scenarios.table_by_ratio(rows)
        assert rec["ratio"] == 0.4 and set(rec) == {"ratio", "VO_p", "VO_c"}

    def test_parallel_matches_serial(self):
        a = scenarios.benchmark(["RVO_p"], [0.6], trials=2, workers=1)
        b = scenarios.benchmark(["RVO_p"], [0.6], trials=2, workers=2)
        assert a == b

    def test_grid_size(self):
        assert len(scenarios.ALL_METHODS) * len(scenarios.ALL_RATIOS) * 100 == 4800
